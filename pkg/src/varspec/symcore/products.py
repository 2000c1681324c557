"""Inner products and the two quadratic functionals over kernel pairs.

The product of two kernels from the same family is again an exponential
weight; inner products therefore reduce to moments of that combined weight:

* IsoGaussian x IsoGaussian: exact per-coordinate Gaussian moments.
* Quartic1D pairs (incl. 1-D IsoGaussian, coerced to omega2 = 0): moments of
  e^(-A x^2/2 - B x^4/4), tabulated with the adaptive integrator.
* CoupledXY pairs (incl. planar IsoGaussian, coerced to c = 0): the y
  integral is done in closed form, int y^n e^(-Lam y^2) dy with
  Lam = A + C x^2, and the remaining x integral is tabulated numerically.

Odd-degree directions vanish identically, so parity holds exactly on every
code path.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .. import quad
from .hamiltonian import HamiltonianSpec, apply_hamiltonian
from .kernels import CoupledXY, IsoGaussian, PolyExp, Quartic1D, WaveFunction, as_wavefunction
from .moments import gaussian_moment_array
from .polynomial import Polynomial

__all__ = [
    "UnsupportedKernelPairError",
    "inner_product",
    "norm_sq",
    "rayleigh",
    "residual_sq",
    "variance_objective",
    "functional_triple",
]


class UnsupportedKernelPairError(TypeError):
    """No closed or reduced form is available for this kernel combination."""


INTEGRATION_TOL = quad.DEFAULT_TOL


# --- moment tables for one combined kernel pair ----------------------------


class _IsoTable:
    """Per-coordinate moments of e^(-w * sum x_i^2)."""

    def __init__(self, w: float, dim: int, max_deg: int):
        self.m = gaussian_moment_array(max_deg, w).tolist()
        self.dim = dim

    def integral_of(self, p: Polynomial) -> float:
        m = self.m
        total = 0.0
        for exps, c in p.terms.items():
            v = c
            for e in exps:
                v *= m[e]
                if v == 0.0:
                    break
            total += v
        return total


class _SeparableXYTable:
    """Moments of e^(-B x^2 - A y^2) (decoupled CoupledXY pair, C = 0)."""

    def __init__(self, a: float, b: float, degx: int, degy: int):
        if a <= 0 or b <= 0:
            raise ValueError(f"non-normalizable separable pair (A={a}, B={b})")
        self.mx = gaussian_moment_array(degx, b).tolist()
        self.my = gaussian_moment_array(degy, a).tolist()

    def integral_of(self, p: Polynomial) -> float:
        mx, my = self.mx, self.my
        return sum(c * mx[ex] * my[ey] for (ex, ey), c in p.terms.items())


def _double_factorials(nmax: int) -> np.ndarray:
    out = np.zeros(nmax // 2 + 1)
    out[0] = 1.0
    for k in range(1, len(out)):
        out[k] = out[k - 1] * (2 * k - 1)
    return out


class _Quartic1DTable:
    """Moments mu_k = int x^k e^(-A x^2/2 - B x^4/4) dx, even k <= max_deg."""

    def __init__(self, a: float, b: float, max_deg: int):
        if b <= 0:
            raise ValueError("quartic table needs B > 0 (use Gaussian moments otherwise)")
        ks = np.arange(0, max_deg + 1, 2)

        def integrand(x: np.ndarray) -> np.ndarray:
            w = np.exp(-0.5 * a * x * x - 0.25 * b * x**4)
            return x[:, None] ** ks[None, :] * w[:, None]

        # every tabulated component is even, so one half line suffices
        vals = 2.0 * quad.integrate_vector(integrand, domain="halfline", tol=INTEGRATION_TOL)
        mu = np.zeros(max_deg + 1)
        mu[ks] = vals
        self.mu = mu.tolist()

    def integral_of(self, p: Polynomial) -> float:
        mu = self.mu
        return sum(c * mu[exps[0]] for exps, c in p.terms.items() if exps[0] % 2 == 0)


class _CoupledXYTable:
    """Moments I(m,n) = int x^m y^n e^(-A y^2 - B x^2 - C x^2 y^2), even m, n.

    The y integral is closed-form Gaussian with Lam(x) = A + C x^2; the x
    integral runs through the adaptive rule with all components at once.
    """

    def __init__(self, a: float, b: float, c: float, degx: int, degy: int):
        if a <= 0:
            raise ValueError(f"coupled pair needs A > 0 for the y reduction, got {a}")
        if b <= 0:
            raise ValueError(f"coupled pair needs B > 0 for x decay, got {b}")
        ms = np.arange(0, degx + 1, 2)
        ns = np.arange(0, degy + 1, 2)
        dfac = _double_factorials(degy)
        sqrt_pi = math.sqrt(math.pi)

        def integrand(x: np.ndarray) -> np.ndarray:
            lam = a + c * x * x
            gauss = np.exp(-b * x * x)
            # y-moment for each even n: (n-1)!! sqrt(pi/lam) / (2 lam)^(n/2)
            ybase = np.empty((len(x), len(ns)))
            ybase[:, 0] = sqrt_pi / np.sqrt(lam)
            for j in range(1, len(ns)):
                ybase[:, j] = ybase[:, j - 1] * dfac[j] / dfac[j - 1] / (2.0 * lam)
            xpow = x[:, None] ** ms[None, :]
            return (xpow[:, :, None] * ybase[:, None, :] * gauss[:, None, None]).reshape(
                len(x), len(ms) * len(ns)
            )

        # even in x for every tabulated component, so one half line suffices
        vals = 2.0 * quad.integrate_vector(integrand, domain="halfline", tol=INTEGRATION_TOL)
        table = np.zeros((degx + 1, degy + 1))
        table[np.ix_(ms, ns)] = vals.reshape(len(ms), len(ns))
        self.table = table.tolist()

    def integral_of(self, p: Polynomial) -> float:
        rows = self.table
        return sum(
            c * rows[ex][ey]
            for (ex, ey), c in p.terms.items()
            if ex % 2 == 0 and ey % 2 == 0
        )


def _kernel_sort_key(k):
    if isinstance(k, IsoGaussian):
        return ("IsoGaussian", k.omega, float(k.dim))
    if isinstance(k, Quartic1D):
        return ("Quartic1D", k.omega1, k.omega2)
    return ("CoupledXY", k.a, k.b, k.c)


@lru_cache(maxsize=65536)
def _pair_table(k1, k2, degs: tuple[int, ...]):
    """Moment table for the combined weight of two kernels, up to degs.

    Cached: pairs among frozen tower states recur at every objective
    evaluation of the outer minimization.
    """
    if isinstance(k1, IsoGaussian) and isinstance(k2, IsoGaussian):
        return _IsoTable(0.5 * (k1.omega + k2.omega), k1.dim, max(degs))
    dim = k1.dim
    if dim == 1:
        w1 = (k1.omega, 0.0) if isinstance(k1, IsoGaussian) else (k1.omega1, k1.omega2)
        w2 = (k2.omega, 0.0) if isinstance(k2, IsoGaussian) else (k2.omega1, k2.omega2)
        if not (isinstance(k1, (IsoGaussian, Quartic1D)) and isinstance(k2, (IsoGaussian, Quartic1D))):
            raise UnsupportedKernelPairError(f"unsupported 1-D pair: {k1!r} x {k2!r}")
        a, b = w1[0] + w2[0], w1[1] + w2[1]
        if b == 0.0:
            return _IsoTable(0.5 * a, 1, degs[0])
        return _Quartic1DTable(a, b, degs[0])
    if dim == 2:
        def as_coupled(k):
            if isinstance(k, IsoGaussian):
                return (0.5 * k.omega, 0.5 * k.omega, 0.0)
            if isinstance(k, CoupledXY):
                return (k.a, k.b, k.c)
            raise UnsupportedKernelPairError(f"unsupported planar kernel {k!r}")

        a1, b1, c1 = as_coupled(k1)
        a2, b2, c2 = as_coupled(k2)
        a, b, c = a1 + a2, b1 + b2, c1 + c2
        if c == 0.0:
            return _SeparableXYTable(a, b, degs[0], degs[1])
        return _CoupledXYTable(a, b, c, degs[0], degs[1])
    raise UnsupportedKernelPairError(
        f"unsupported kernel pair in dimension {dim}: {k1!r} x {k2!r}"
    )


# --- bilinear forms ---------------------------------------------------------


def _max_degs(polys, dim: int) -> tuple[int, ...]:
    degs = [0] * dim
    for p in polys:
        for i, e in enumerate(p.max_degrees()):
            if e > degs[i]:
                degs[i] = e
    return tuple(degs)


def _bucket_products(ga: dict, gb: dict) -> dict:
    """Per canonical kernel pair, the summed product polynomial of <A, B>."""
    buckets: dict[tuple, Polynomial] = {}
    for ka, pa in ga.items():
        for kb, qb in gb.items():
            if _kernel_sort_key(ka) <= _kernel_sort_key(kb):
                key = (ka, kb)
            else:
                key = (kb, ka)
            prod = pa * qb
            if key in buckets:
                buckets[key] = buckets[key] + prod
            else:
                buckets[key] = prod
    return buckets


def _argument_order_key(grouped: dict) -> tuple:
    return tuple(
        sorted((_kernel_sort_key(k), tuple(sorted(p.terms.items()))) for k, p in grouped.items())
    )


def inner_product(f, g) -> float:
    """<f, g> = int f g d^n x over all pairs of kernels.

    Exactly symmetric: the two arguments are brought into a canonical order
    before any arithmetic, so swapping them reproduces the identical float
    operations.
    """
    wf, wg = as_wavefunction(f), as_wavefunction(g)
    if wf.dim != wg.dim:
        raise ValueError(f"dimension mismatch: {wf.dim} vs {wg.dim}")
    ga, gb = wf.grouped(), wg.grouped()
    if _argument_order_key(gb) < _argument_order_key(ga):
        ga, gb = gb, ga
    buckets = _bucket_products(ga, gb)
    total = 0.0
    for (k1, k2), poly in buckets.items():
        table = _pair_table(k1, k2, _max_degs([poly], wf.dim))
        total += table.integral_of(poly)
    return total


def norm_sq(f) -> float:
    """<f, f>."""
    return inner_product(f, f)


def functional_triple(psi, h: HamiltonianSpec) -> tuple[float, float, float]:
    """(<psi,psi>, <psi,H psi>, <H psi,H psi>) sharing one moment table per pair.

    H preserves each term's kernel, so psi and H psi group over the same
    kernel set and all three bilinear forms reduce to the same pair tables.
    """
    wf = as_wavefunction(psi)
    hpsi = apply_hamiltonian(h, wf)
    gp = wf.grouped()
    gq = hpsi.grouped()
    kernels = sorted(set(gp) | set(gq), key=_kernel_sort_key)
    dim = wf.dim
    zero = Polynomial.zero(dim)
    s = hh = hmix = 0.0
    for i, k1 in enumerate(kernels):
        p1, q1 = gp.get(k1, zero), gq.get(k1, zero)
        for k2 in kernels[i:]:
            p2, q2 = gp.get(k2, zero), gq.get(k2, zero)
            if k1 is k2 or k1 == k2:
                poly_s = p1 * p2
                poly_h = p1 * q2
                poly_hh = q1 * q2
            else:
                poly_s = 2.0 * (p1 * p2)
                poly_h = p1 * q2 + p2 * q1
                poly_hh = 2.0 * (q1 * q2)
            table = _pair_table(k1, k2, _max_degs([poly_s, poly_h, poly_hh], dim))
            s += table.integral_of(poly_s)
            hmix += table.integral_of(poly_h)
            hh += table.integral_of(poly_hh)
    return s, hmix, hh


def rayleigh(psi, h: HamiltonianSpec) -> float:
    """<psi, H psi> / ||psi||^2."""
    wf = as_wavefunction(psi)
    s = norm_sq(wf)
    if not s > 0:
        raise ValueError("zero-norm state")
    return inner_product(wf, apply_hamiltonian(h, wf)) / s


def residual_sq(psi, h: HamiltonianSpec, energy: float) -> float:
    """||(H - E) psi||^2 / ||psi||^2, expanded through kernel-pair moments."""
    s, hmix, hh = functional_triple(psi, h)
    if not s > 0:
        raise ValueError("zero-norm state")
    return (hh - 2.0 * energy * hmix + energy * energy * s) / s


def variance_objective(psi, h: HamiltonianSpec) -> tuple[float, float]:
    """(E_opt, R^2) with E_opt the Rayleigh quotient and R^2 = <H^2> - <H>^2.

    R^2 is the minimum over E of residual_sq(psi, h, E), attained at E_opt.
    """
    s, hmix, hh = functional_triple(psi, h)
    if not s > 0:
        raise ValueError("zero-norm state")
    e_opt = hmix / s
    return e_opt, hh / s - e_opt * e_opt
