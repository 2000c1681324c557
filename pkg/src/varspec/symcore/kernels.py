"""Exponential weight kernels and the wavefunctions built on top of them.

Three kernel families, each closed under second derivatives (differentiating
the exponent only produces polynomial factors times the same kernel):

* ``IsoGaussian``  -- e^(-omega * sum_i x_i^2 / 2) in any dimension,
* ``Quartic1D``    -- e^(-omega1 x^2/2 - omega2 x^4/4) on the line,
* ``CoupledXY``    -- e^(-a y^2 - b x^2 - c x^2 y^2) in the plane.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .polynomial import Polynomial

__all__ = ["IsoGaussian", "Quartic1D", "CoupledXY", "ExpKernel", "PolyExp", "WaveFunction", "as_wavefunction"]


@dataclass(frozen=True)
class IsoGaussian:
    """Isotropic Gaussian kernel e^(-omega/2 * sum x_i^2)."""

    omega: float
    dim: int = 1

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be > 0, got {self.omega}")
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")

    def exponent_poly(self) -> Polynomial:
        return Polynomial(
            self.dim, {tuple(2 if j == i else 0 for j in range(self.dim)): 0.5 * self.omega for i in range(self.dim)}
        )

    def evaluate(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return np.exp(-0.5 * self.omega * np.sum(pts * pts, axis=1))


@dataclass(frozen=True)
class Quartic1D:
    """One-dimensional kernel e^(-omega1 x^2/2 - omega2 x^4/4)."""

    omega1: float
    omega2: float

    def __post_init__(self):
        if self.omega2 < 0:
            raise ValueError(f"omega2 must be >= 0, got {self.omega2}")
        if self.omega2 == 0 and not self.omega1 > 0:
            raise ValueError("need omega2 > 0 or omega1 > 0 for a normalizable kernel")

    @property
    def dim(self) -> int:
        return 1

    def exponent_poly(self) -> Polynomial:
        return Polynomial(1, {(2,): 0.5 * self.omega1, (4,): 0.25 * self.omega2})

    def evaluate(self, pts: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(pts, dtype=float))[:, 0]
        return np.exp(-0.5 * self.omega1 * x * x - 0.25 * self.omega2 * x**4)


@dataclass(frozen=True)
class CoupledXY:
    """Planar kernel e^(-a y^2 - b x^2 - c x^2 y^2); coordinate 0 is x, 1 is y."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if self.a < 0 or self.b < 0 or self.c < 0:
            raise ValueError(f"parameters must be >= 0, got {(self.a, self.b, self.c)}")
        if self.a == 0 and self.b == 0 and self.c == 0:
            raise ValueError("all parameters zero: kernel not normalizable")

    @property
    def dim(self) -> int:
        return 2

    def exponent_poly(self) -> Polynomial:
        return Polynomial(2, {(0, 2): self.a, (2, 0): self.b, (2, 2): self.c})

    def evaluate(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        x, y = pts[:, 0], pts[:, 1]
        return np.exp(-self.a * y * y - self.b * x * x - self.c * x * x * y * y)


ExpKernel = Union[IsoGaussian, Quartic1D, CoupledXY]


@lru_cache(maxsize=512)
def kernel_exponent_data(kernel: ExpKernel) -> tuple[tuple[Polynomial, ...], Polynomial]:
    """(grad phi, laplacian(phi) - |grad phi|^2) for the kernel e^(-phi)."""
    phi = kernel.exponent_poly()
    grads = tuple(phi.partial(i) for i in range(kernel.dim))
    combo = Polynomial.zero(kernel.dim)
    for i, g in enumerate(grads):
        combo = combo + g.partial(i) - g * g
    return grads, combo


@dataclass(frozen=True, eq=False)
class PolyExp:
    """A polynomial prefactor times an exponential kernel."""

    poly: Polynomial
    kernel: ExpKernel

    def __post_init__(self):
        if self.poly.nvars != self.kernel.dim:
            raise ValueError(
                f"polynomial has {self.poly.nvars} coordinates, kernel has {self.kernel.dim}"
            )

    @property
    def dim(self) -> int:
        return self.kernel.dim

    def scaled(self, factor: float) -> "PolyExp":
        return PolyExp(self.poly * factor, self.kernel)

    def evaluate(self, pts: np.ndarray) -> np.ndarray:
        pts2 = np.atleast_2d(np.asarray(pts, dtype=float))
        return self.poly(pts2) * self.kernel.evaluate(pts2)


class WaveFunction:
    """A finite linear combination of PolyExp terms (kernels may differ)."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        if isinstance(terms, PolyExp):
            terms = (terms,)
        terms = tuple(terms)
        if not terms:
            raise ValueError("wavefunction needs at least one term")
        dim = terms[0].dim
        if any(t.dim != dim for t in terms):
            raise ValueError("all terms must share the coordinate count")
        self.terms = terms

    @property
    def dim(self) -> int:
        return self.terms[0].dim

    def scaled(self, factor: float) -> "WaveFunction":
        return WaveFunction(tuple(t.scaled(factor) for t in self.terms))

    def __add__(self, other: "WaveFunction") -> "WaveFunction":
        other = as_wavefunction(other)
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return WaveFunction(self.terms + other.terms)

    def evaluate(self, pts: np.ndarray) -> np.ndarray:
        pts2 = np.atleast_2d(np.asarray(pts, dtype=float))
        out = np.zeros(pts2.shape[0])
        for t in self.terms:
            out += t.evaluate(pts2)
        return out

    def grouped(self) -> dict[ExpKernel, Polynomial]:
        """Terms combined per distinct kernel."""
        out: dict[ExpKernel, Polynomial] = {}
        for t in self.terms:
            if t.kernel in out:
                out[t.kernel] = out[t.kernel] + t.poly
            else:
                out[t.kernel] = t.poly
        return out

    def __repr__(self):
        return f"WaveFunction({len(self.terms)} terms, dim={self.dim})"


def as_wavefunction(f) -> WaveFunction:
    """Coerce a PolyExp (or WaveFunction) to a WaveFunction."""
    if isinstance(f, WaveFunction):
        return f
    if isinstance(f, PolyExp):
        return WaveFunction((f,))
    raise TypeError(f"cannot interpret {type(f).__name__} as a wavefunction")
