"""Exact multivariate polynomial arithmetic over machine reals.

Terms are stored as a map from exponent multi-indices to coefficients; only
exactly-zero coefficients are pruned, so parity cancellations stay exact.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

__all__ = ["MultiIndex", "Polynomial", "poly_add", "poly_mul", "poly_partial"]

MultiIndex = tuple[int, ...]


class Polynomial:
    """A real polynomial in ``nvars`` variables with exact term bookkeeping."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[MultiIndex, float] | None = None):
        if nvars < 1:
            raise ValueError("polynomial needs at least one variable")
        self.nvars = nvars
        out: dict[MultiIndex, float] = {}
        if terms:
            for exps, coeff in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != nvars:
                    raise ValueError(
                        f"multi-index {exps} has {len(exps)} entries, expected {nvars}"
                    )
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                c = float(coeff)
                if c != 0.0:
                    out[exps] = out.get(exps, 0.0) + c
                    if out[exps] == 0.0:
                        del out[exps]
        self.terms = out

    # --- constructors ---

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars)

    @classmethod
    def constant(cls, value: float, nvars: int) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def monomial(cls, exps: Iterable[int], coeff: float = 1.0, nvars: int | None = None) -> "Polynomial":
        exps = tuple(int(e) for e in exps)
        return cls(nvars if nvars is not None else len(exps), {exps: coeff})

    @classmethod
    def variable(cls, index: int, nvars: int, power: int = 1) -> "Polynomial":
        if not 0 <= index < nvars:
            raise IndexError(f"variable index {index} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[index] = power
        return cls(nvars, {tuple(exps): 1.0})

    # --- ring operations ---

    def _check_compatible(self, other: "Polynomial") -> None:
        if self.nvars != other.nvars:
            raise ValueError(
                f"incompatible coordinate counts: {self.nvars} vs {other.nvars}"
            )

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = Polynomial.constant(float(other), self.nvars)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_compatible(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            s = out.get(exps, 0.0) + c
            if s == 0.0:
                out.pop(exps, None)
            else:
                out[exps] = s
        res = Polynomial.__new__(Polynomial)
        res.nvars = self.nvars
        res.terms = out
        return res

    __radd__ = __add__

    def __neg__(self):
        res = Polynomial.__new__(Polynomial)
        res.nvars = self.nvars
        res.terms = {e: -c for e, c in self.terms.items()}
        return res

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = Polynomial.constant(float(other), self.nvars)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            c = float(other)
            if c == 0.0:
                return Polynomial.zero(self.nvars)
            res = Polynomial.__new__(Polynomial)
            res.nvars = self.nvars
            res.terms = {e: c * v for e, v in self.terms.items()}
            return res
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_compatible(other)
        out: dict[MultiIndex, float] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0.0) + c1 * c2
                if s == 0.0:
                    out.pop(e, None)
                else:
                    out[e] = s
        res = Polynomial.__new__(Polynomial)
        res.nvars = self.nvars
        res.terms = out
        return res

    __rmul__ = __mul__

    def partial(self, coord: int) -> "Polynomial":
        """Formal derivative with respect to the given coordinate."""
        if not 0 <= coord < self.nvars:
            raise IndexError(f"coordinate index {coord} out of range")
        out: dict[MultiIndex, float] = {}
        for exps, c in self.terms.items():
            e = exps[coord]
            if e == 0:
                continue
            new = list(exps)
            new[coord] = e - 1
            out[tuple(new)] = c * e
        res = Polynomial.__new__(Polynomial)
        res.nvars = self.nvars
        res.terms = out
        return res

    # --- queries ---

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def max_degrees(self) -> MultiIndex:
        """Per-coordinate maximum exponent (zeros for the zero polynomial)."""
        degs = [0] * self.nvars
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e > degs[i]:
                    degs[i] = e
        return tuple(degs)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at points of shape (m, nvars) (or (nvars,) for a single one)."""
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        if single:
            pts = pts[None, :]
        if pts.shape[1] != self.nvars:
            raise ValueError(f"points have {pts.shape[1]} coordinates, expected {self.nvars}")
        out = np.zeros(pts.shape[0])
        for exps, c in self.terms.items():
            mono = np.full(pts.shape[0], c)
            for i, e in enumerate(exps):
                if e:
                    mono *= pts[:, i] ** e
            out += mono
        return out[0] if single else out

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    __hash__ = None  # mutable mapping inside

    def __repr__(self):
        if not self.terms:
            return "Polynomial(0)"
        bits = []
        for exps in sorted(self.terms, key=lambda e: (sum(e), e)):
            c = self.terms[exps]
            mono = "*".join(f"x{i}^{e}" for i, e in enumerate(exps) if e)
            bits.append(f"{c:g}{'*' + mono if mono else ''}")
        return "Polynomial(" + " + ".join(bits) + ")"


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    """Exact sum of two polynomials over the same coordinates."""
    return p + q


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    """Exact product of two polynomials over the same coordinates."""
    return p * q


def poly_partial(p: Polynomial, coord: int) -> Polynomial:
    """Formal partial derivative of ``p`` with respect to coordinate ``coord``."""
    return p.partial(coord)
