"""Independent spectral benchmark: cut-off diagonalization in an orthonormal
Legendre x Laguerre basis.

The reduced planar operator

    H = -(1/r^5) d_r (r^5 d_r) -+ (16/r^2) (1/sin th) d_th (sin th d_th)
        + (r^4/8)(1 - cos th)

acts on the Hilbert space with measure r^5 dr sin th dth.  Basis functions
f_{ln}(th, r) = Ptilde_l(cos th) phi_n(r) with phi_n(r) =
sqrt(n!/(n+5)!) L_n^(5)(r) e^(-r/2) orthonormal against r^5 dr, and
orthonormalized Legendre polynomials in u = cos th.  The double index is
flattened with the Cantor pairing p(l, n) = (l+n)(l+n+1)/2 + n; truncations
H^(N) are leading principal submatrices, so tracked eigenvalues decrease
monotonically with N and upper-bound the true spectrum.

The sign in front of the angular operator is configurable: ``as_written``
keeps the attractive -16 l(l+1)/r^2 centrifugal term of the displayed
operator, ``repulsive`` flips it to +16 l(l+1)/r^2 (the self-adjoint
reduction of a planar Laplacian).  Which one reproduces the published
benchmark levels is decided empirically by the callers, never assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .quad import gauss_laguerre, gauss_legendre

__all__ = [
    "SIGN_CONVENTIONS",
    "pairing",
    "unpairing",
    "RadialBasis",
    "AngularBasis",
    "CutoffMatrix",
    "matrix_element",
    "assemble",
    "lowest_eigenvalues",
    "convergence_scan",
]

SIGN_CONVENTIONS = ("as_written", "repulsive")

RADIAL_WEIGHT_POWER = 5   # measure r^5 dr
POTENTIAL_R_POWER = 4     # potential r^4/8
ANGULAR_COUPLING = 16.0


def pairing(l: int, n: int) -> int:
    """Cantor pairing p(l, n) = (l+n)(l+n+1)/2 + n; a bijection onto N."""
    if l < 0 or n < 0:
        raise ValueError(f"indices must be >= 0, got ({l}, {n})")
    s = l + n
    return s * (s + 1) // 2 + n


def unpairing(a: int) -> tuple[int, int]:
    """Inverse of ``pairing`` via the integer triangular root."""
    if a < 0:
        raise ValueError(f"index must be >= 0, got {a}")
    s = (math.isqrt(8 * a + 1) - 1) // 2
    while (s + 1) * (s + 2) // 2 <= a:
        s += 1
    while s * (s + 1) // 2 > a:
        s -= 1
    n = a - s * (s + 1) // 2
    return s - n, n


def _genlaguerre_all(nmax: int, alpha: int, r: np.ndarray) -> np.ndarray:
    """L_k^(alpha)(r) for k = 0..nmax, shape (nmax+1, len(r))."""
    out = np.empty((nmax + 1, len(r)))
    out[0] = 1.0
    if nmax >= 1:
        out[1] = 1.0 + alpha - r
    for k in range(1, nmax):
        out[k + 1] = ((2 * k + 1 + alpha - r) * out[k] - (k + alpha) * out[k - 1]) / (k + 1)
    return out


@lru_cache(maxsize=None)
def _radial_norm(n: int) -> float:
    """sqrt(n!/(n+5)!) = 1/sqrt((n+1)(n+2)...(n+5))."""
    prod = 1.0
    for k in range(1, RADIAL_WEIGHT_POWER + 1):
        prod *= n + k
    return 1.0 / math.sqrt(prod)


class RadialBasis:
    """phi_n(r) = sqrt(n!/(n+5)!) L_n^(5)(r) e^(-r/2), orthonormal vs r^5 dr."""

    def __init__(self, max_n: int):
        if max_n < 0:
            raise ValueError("max_n must be >= 0")
        self.max_n = max_n

    def value(self, n: int, r: np.ndarray) -> np.ndarray:
        self._check(n)
        r = np.asarray(r, dtype=float)
        lag = _genlaguerre_all(n, RADIAL_WEIGHT_POWER, r)[n]
        return _radial_norm(n) * lag * np.exp(-0.5 * r)

    def derivative(self, n: int, r: np.ndarray) -> np.ndarray:
        """d phi_n / dr, using d L_n^(5)/dr = -L_{n-1}^(6)."""
        self._check(n)
        r = np.asarray(r, dtype=float)
        lag = _genlaguerre_all(n, RADIAL_WEIGHT_POWER, r)[n]
        dlag = -_genlaguerre_all(n - 1, RADIAL_WEIGHT_POWER + 1, r)[n - 1] if n >= 1 else 0.0
        return _radial_norm(n) * (dlag - 0.5 * lag) * np.exp(-0.5 * r)

    def _check(self, n: int) -> None:
        if not 0 <= n <= self.max_n:
            raise ValueError(f"radial index {n} outside 0..{self.max_n}")


class AngularBasis:
    """Orthonormalized Legendre polynomials sqrt((2l+1)/2) P_l(u) on [-1, 1]."""

    def __init__(self, max_l: int):
        if max_l < 0:
            raise ValueError("max_l must be >= 0")
        self.max_l = max_l

    def value(self, l: int, u: np.ndarray) -> np.ndarray:
        if not 0 <= l <= self.max_l:
            raise ValueError(f"angular index {l} outside 0..{self.max_l}")
        u = np.asarray(u, dtype=float)
        p_prev = np.ones_like(u)
        p = u.copy()
        if l == 0:
            return math.sqrt(0.5) * p_prev
        for j in range(2, l + 1):
            p_prev, p = p, ((2 * j - 1) * u * p - (j - 1) * p_prev) / j
        return math.sqrt((2 * l + 1) / 2.0) * p


def _angular_potential_overlap(lp: int, l: int) -> float:
    """<Ptilde_lp, (1 - u) Ptilde_l>; nonzero only for |l - lp| <= 1."""
    if lp == l:
        return 1.0
    lo = min(l, lp)
    if abs(l - lp) == 1:
        return -(lo + 1) / math.sqrt((2 * lo + 1) * (2 * lo + 3))
    return 0.0


@lru_cache(maxsize=None)
def _radial_integrals(n: int, n2: int) -> tuple[float, float, float]:
    """(kinetic, r^-2 overlap, r^4 overlap) against the r^5 measure.

    After folding the e^(-r) product of the two radial functions into the
    Gauss-Laguerre weight every integrand is a polynomial, so the rule order
    from the degree bound makes the integrals exact (with margin).
    """
    max_poly_deg = n + n2 + RADIAL_WEIGHT_POWER + POTENTIAL_R_POWER
    order = (max_poly_deg + 12) // 2 + 1 + 8
    rule = gauss_laguerre(order)
    r = rule.nodes
    w = rule.weights

    lag_n = _genlaguerre_all(n, RADIAL_WEIGHT_POWER, r)[n]
    lag_m = _genlaguerre_all(n2, RADIAL_WEIGHT_POWER, r)[n2]
    dlag_n = -_genlaguerre_all(n - 1, RADIAL_WEIGHT_POWER + 1, r)[n - 1] if n >= 1 else np.zeros_like(r)
    dlag_m = -_genlaguerre_all(n2 - 1, RADIAL_WEIGHT_POWER + 1, r)[n2 - 1] if n2 >= 1 else np.zeros_like(r)

    norm = _radial_norm(n) * _radial_norm(n2)
    # phi = N L e^{-r/2}; phi' = N (L' - L/2) e^{-r/2}; the e^{-r} pair weight
    # is carried by the quadrature rule itself.
    pn = lag_n
    pm = lag_m
    dpn = dlag_n - 0.5 * lag_n
    dpm = dlag_m - 0.5 * lag_m

    r3 = r**3
    r5 = r3 * r * r
    kinetic = norm * float(w @ (dpn * dpm * r5))
    inv2 = norm * float(w @ (pn * pm * r3))
    pot4 = norm * float(w @ (pn * pm * r5 * r**POTENTIAL_R_POWER))
    return kinetic, inv2, pot4


def matrix_element(l: int, n: int, lp: int, np_: int, sign_convention: str = "as_written") -> float:
    """<f_{lp,np}, H f_{ln}> in the orthonormal product basis.

    The Legendre eigenrelation turns the angular derivative term into
    -+16 l(l+1) <phi_np, r^-2 phi_n> on the angular diagonal; the radial
    kinetic term is integrated by parts to first-derivative form; the
    potential couples l to l' with |l - l'| <= 1 through (1 - u).
    """
    if sign_convention not in SIGN_CONVENTIONS:
        raise ValueError(f"unknown sign convention {sign_convention!r}")
    if min(l, n, lp, np_) < 0:
        raise ValueError("indices must be >= 0")
    angular_sign = -1.0 if sign_convention == "as_written" else 1.0
    value = 0.0
    if l == lp:
        kinetic, inv2, _ = _radial_integrals(min(n, np_), max(n, np_))
        value += kinetic + angular_sign * ANGULAR_COUPLING * l * (l + 1) * inv2
    overlap = _angular_potential_overlap(lp, l)
    if overlap != 0.0:
        _, _, pot4 = _radial_integrals(min(n, np_), max(n, np_))
        value += 0.125 * pot4 * overlap
    return value


@dataclass(frozen=True, eq=False)
class CutoffMatrix:
    """Symmetric truncation H^(N) with its flattened index map a <-> (l, n)."""

    cutoff: int
    entries: np.ndarray
    index_pairs: tuple[tuple[int, int], ...]
    sign_convention: str

    def __post_init__(self):
        size = self.cutoff + 1
        if self.entries.shape != (size, size):
            raise ValueError(f"expected {(size, size)} matrix, got {self.entries.shape}")
        asym = float(np.max(np.abs(self.entries - self.entries.T)))
        if asym >= 1e-10:
            raise ValueError(f"matrix not symmetric: max |H_ab - H_ba| = {asym:.3e}")
        self.entries.flags.writeable = False


def assemble(n_cutoff: int, sign_convention: str = "as_written") -> CutoffMatrix:
    """Build the (N+1) x (N+1) truncation H^(N)_{ab} = H_{p^-1(a), p^-1(b)}."""
    if n_cutoff < 0:
        raise ValueError("cut-off must be >= 0")
    pairs = tuple(unpairing(a) for a in range(n_cutoff + 1))
    size = n_cutoff + 1
    entries = np.empty((size, size))
    for a in range(size):
        la, na = pairs[a]
        for b in range(a, size):
            lb, nb = pairs[b]
            entries[a, b] = entries[b, a] = matrix_element(la, na, lb, nb, sign_convention)
    return CutoffMatrix(n_cutoff, entries, pairs, sign_convention)


def lowest_eigenvalues(matrix: CutoffMatrix | np.ndarray, k: int) -> list[float]:
    """k smallest eigenvalues, ascending, of the dense symmetric matrix.

    Solved by orthogonal similarity (LAPACK tridiagonalization + implicit
    shifts); each returned pair is residual-checked against ||M||.
    """
    m = matrix.entries if isinstance(matrix, CutoffMatrix) else np.asarray(matrix, dtype=float)
    if not 1 <= k <= m.shape[0]:
        raise ValueError(f"need 1 <= k <= {m.shape[0]}, got {k}")
    vals, vecs = np.linalg.eigh(m)
    scale = float(np.linalg.norm(m, 2))
    resid = np.linalg.norm(m @ vecs[:, :k] - vecs[:, :k] * vals[:k], axis=0)
    bad = np.nonzero(resid > 1e-8 * max(scale, 1.0))[0]
    if bad.size:
        raise RuntimeError(f"eigenpair residual too large at index {int(bad[0])}")
    return [float(v) for v in vals[:k]]


def convergence_scan(
    n_list: Sequence[int],
    k: int,
    sign_convention: str = "as_written",
    monotonicity_slack: float = 1e-9,
) -> list[tuple[int, list[float]]]:
    """Eigenvalue columns E_0..E_{k-1} for each cut-off in ascending n_list.

    Since every smaller truncation is a leading principal submatrix of the
    largest one, each tracked eigenvalue must be non-increasing in N (Cauchy
    interlacing); a violation beyond the slack means an assembly bug and
    raises immediately.
    """
    n_list = list(n_list)
    if n_list != sorted(n_list):
        raise ValueError("cut-off list must be ascending")
    if k > min(n_list) + 1:
        raise ValueError(f"k={k} exceeds the smallest truncation size {min(n_list) + 1}")
    full = assemble(n_list[-1], sign_convention)
    rows: list[tuple[int, list[float]]] = []
    prev: list[float] | None = None
    for n in n_list:
        sub = full.entries[: n + 1, : n + 1]
        vals = lowest_eigenvalues(sub, k)
        if prev is not None:
            for i, (new, old) in enumerate(zip(vals, prev)):
                if new > old + monotonicity_slack:
                    raise RuntimeError(
                        f"eigenvalue E_{i} increased from {old} to {new} at N={n}; "
                        "assembly bug or wrong sign convention"
                    )
        rows.append((n, vals))
        prev = vals
    return rows
