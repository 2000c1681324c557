"""The SU(2)-invariant matrix model over d vectors in R^3.

H = -sum_i lap_i + sum_{i,j} (q_i x q_j)^2 acts on 3d coordinates q_{ia};
the potential expands exactly to a degree-4 polynomial through
(q_i x q_j)^2 = |q_i|^2 |q_j|^2 - (q_i . q_j)^2.  Besides the numeric
variational path (Gaussian family, levels 0 and 1), this module carries the
closed forms for <H>, <H^2>, R^2 at level 0, the exact minimizer
omega_min(d) with its characteristic equation, the large-d asymptotics, and
the level-1 energy functional of the d^(-4/3)-rescaled operator.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from ..engine import AnsatzFamily
from ..symcore import HamiltonianSpec, IsoGaussian, PolyExp, Polynomial, WaveFunction

__all__ = [
    "su2_potential",
    "su2_hamiltonian",
    "su2_family",
    "su2_analytic",
    "su2_ground_closed_form",
    "su2_large_d_asymptotics",
    "su2_excited_closed_form",
    "Su2Analytic",
    "Su2Ground",
    "Su2Asymptotics",
    "Su2Excited",
]

OMEGA_BOX = ((0.01, 10.0),)


def _var(i: int, a: int) -> int:
    return 3 * i + a


def su2_potential(d: int) -> Polynomial:
    """sum over pairs i < j of (q_i x q_j)^2, expanded over 3d coordinates.

    Unordered pair counting is the convention consistent with the level-0
    closed forms (<H>, <H^2>, R^2 all match the 3d-coordinate moments to
    machine precision) and with the d = 2 reduction whose potential is
    x^2 y^2; counting ordered pairs would double the quartic term and none
    of those checks would hold.
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    nvars = 3 * d
    terms: dict[tuple[int, ...], float] = {}

    def add(exps: dict[int, int], coeff: float) -> None:
        key = tuple(exps.get(v, 0) for v in range(nvars))
        terms[key] = terms.get(key, 0.0) + coeff

    for i in range(d):
        for j in range(i + 1, d):
            for a in range(3):
                for b in range(3):
                    if a == b:
                        continue  # |q_i|^2 |q_j|^2 and (q_i.q_j)^2 cancel on the diagonal
                    add({_var(i, a): 2, _var(j, b): 2}, 1.0)
                    add({_var(i, a): 1, _var(j, a): 1, _var(i, b): 1, _var(j, b): 1}, -1.0)
    return Polynomial(nvars, terms)


def su2_hamiltonian(d: int, rescaled: bool = False) -> HamiltonianSpec:
    """The matrix-model operator; ``rescaled`` applies the d^(-4/3) factor."""
    scale = d ** (-4.0 / 3.0) if rescaled else 1.0
    label = f"su2_d{d}" + ("_rescaled" if rescaled else "")
    return HamiltonianSpec(3 * d, su2_potential(d), label=label, scale=scale)


def su2_family(d: int) -> tuple[HamiltonianSpec, AnsatzFamily]:
    """Isotropic-Gaussian family: level 0 prefactor 1, level 1 sum_ia q_ia^2."""
    if d < 2:
        raise ValueError("the variational tower needs d >= 2 (d = 1 has zero potential)")
    nvars = 3 * d
    radial = Polynomial(
        nvars, {tuple(2 if v == w else 0 for v in range(nvars)): 1.0 for w in range(nvars)}
    )

    def basis_fn(n: int, omega):
        if n > 1:
            raise ValueError(f"family defines levels 0 and 1 only, got {n}")
        kernel = IsoGaussian(omega[0], nvars)
        pref = Polynomial.constant(1.0, nvars) if n == 0 else radial
        return WaveFunction(PolyExp(pref, kernel))

    family = AnsatzFamily(
        dim=nvars,
        param_count=1,
        basis_fn=basis_fn,
        param_box=OMEGA_BOX,
        label=f"su2_d{d}",
    )
    return su2_hamiltonian(d), family


class Su2Analytic(NamedTuple):
    h_mean: float
    h2_mean: float
    r_sq: float


def su2_analytic(d: int, omega0: float) -> Su2Analytic:
    """Closed forms for the Gaussian level-0 state of the unrescaled operator.

    h_mean  = 3/2 d w + 3/4 d(d-1) / w^2
    h2_mean = 3/4 d(2+3d) w^2 + 3/4 d(d-1)(3d-4) / w + 3/16 d(d-1)(d+2)(3d-1) / w^4
    r_sq    = 3/2 d w^2 - 3 d(d-1) / w + 3/8 d(d-1)(4d-1) / w^4

    with r_sq = h2_mean - h_mean^2 as an identity.
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if omega0 <= 0:
        raise ValueError(f"omega0 must be > 0, got {omega0}")
    w = float(omega0)
    h_mean = 1.5 * d * w + 0.75 * d * (d - 1) / w**2
    h2_mean = (
        0.75 * d * (2 + 3 * d) * w**2
        + 0.75 * d * (d - 1) * (3 * d - 4) / w
        + (3.0 / 16.0) * d * (d - 1) * (d + 2) * (3 * d - 1) / w**4
    )
    r_sq = 1.5 * d * w**2 - 3.0 * d * (d - 1) / w + 0.375 * d * (d - 1) * (4 * d - 1) / w**4
    return Su2Analytic(h_mean, h2_mean, r_sq)


class Su2Ground(NamedTuple):
    omega_min: float
    e0: float
    r0_sq: float


def su2_ground_closed_form(d: int) -> Su2Ground:
    """Exact level-0 minimizer and values (unrescaled convention).

    omega_min(d) = ((1 - d + sqrt(3 (d-1)(3d-1))) / 2)^(1/3), the positive
    root of 2 w^6 + 2 (d-1) w^3 - 4 d^2 + 5 d - 1 = 0.
    """
    if d < 2:
        raise ValueError(f"closed forms need d >= 2, got {d}")
    s = math.sqrt(3.0 * (d - 1) * (3 * d - 1))
    z = 0.5 * (1.0 - d + s)
    omega_min = z ** (1.0 / 3.0)
    e0 = 3.0 * d * s / (4.0 * (1.0 - d + s)) ** (2.0 / 3.0)
    r0_sq = 18.0 * d * (d - 1) * (6 * d - 3 - 2 * s) / (4.0 * (1.0 - d + s)) ** (4.0 / 3.0)

    char = 2.0 * omega_min**6 + 2.0 * (d - 1) * omega_min**3 - 4.0 * d**2 + 5.0 * d - 1.0
    assert abs(char) <= 1e-9 * max(1.0, 4.0 * d**2), (
        f"characteristic equation violated at d={d}: residual {char:.3e}"
    )
    r_here = su2_analytic(d, omega_min).r_sq
    for factor in (1.0 - 1e-4, 1.0 + 1e-4):
        assert su2_analytic(d, omega_min * factor).r_sq >= r_here - 1e-12 * abs(r_here), (
            f"omega_min is not a local minimizer of r_sq at d={d}"
        )
    return Su2Ground(omega_min, e0, r0_sq)


class Su2Asymptotics(NamedTuple):
    omega_asym: float
    e0_asym: float
    r0_sq_asym: float


def su2_large_d_asymptotics(d: int) -> Su2Asymptotics:
    """Leading large-d behaviour: d^(1/3), 9/4 d^(4/3), 9/4 d^(2/3)."""
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    return Su2Asymptotics(d ** (1.0 / 3.0), 2.25 * d ** (4.0 / 3.0), 2.25 * d ** (2.0 / 3.0))


class Su2Excited(NamedTuple):
    omega1_min: float
    e1: float


def _excited_quotient(d: int, omega0: float, omega1: float) -> float:
    """<psi1, H~ psi1> / ||psi1||^2 for the rescaled operator.

    Both closed forms share the overall (pi/w1)^(3d/2); dividing it out
    leaves the ratio t^(3d) with t = 2 sqrt(w0 w1) / (w0 + w1) <= 1, which is
    safe to evaluate at any d.
    """
    w0, w1 = omega0, omega1
    wsum = w0 + w1
    t = 2.0 * math.sqrt(w0 * w1) / wsum
    t3d = math.exp(3.0 * d * math.log(t)) if t > 0 else 0.0

    num_gauss = (
        0.375 * d * (9 * d**2 - 6 * d + 8) / w1
        + (9.0 / 16.0) * d * (d - 1) * (d + 2) * (3 * d + 4) / w1**4
    )
    num_cross = (
        (-40.5 * d**3 * w0 + 6.75 * d**3 * (d - 1) / w0**2) / wsum**2
        + 18.0 * d**2 * (3 * d + 2) * w0**2 / wsum**3
        - 18.0 * d**2 * (d - 1) * (3 * d + 4) / wsum**4
    )
    den_gauss = 0.75 * d * (3 * d + 2) / w1**2
    den_cross = -9.0 * d**2 / wsum**2

    denom = den_gauss + t3d * den_cross
    if denom <= 0:
        raise FloatingPointError(f"nonpositive ||psi1||^2 at omega1={w1} (d={d})")
    return d ** (-4.0 / 3.0) * (num_gauss + t3d * num_cross) / denom


def _golden_min(fn, lo: float, hi: float, tol: float = 1e-12) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    e = a + invphi * (b - a)
    fc, fe = fn(c), fn(e)
    while b - a > tol * (abs(a) + abs(b)):
        if fc < fe:
            b, e, fe = e, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, e, fe
            e = a + invphi * (b - a)
            fe = fn(e)
    return 0.5 * (a + b)


def su2_excited_closed_form(d: int) -> Su2Excited:
    """Level-1 energy of the rescaled operator: min over omega1 of the
    Rayleigh quotient, with omega0 frozen at the level-0 closed-form minimum."""
    if d < 2:
        raise ValueError(f"closed forms need d >= 2, got {d}")
    omega0 = su2_ground_closed_form(d).omega_min

    def fn(w1: float) -> float:
        try:
            return _excited_quotient(d, omega0, w1)
        except FloatingPointError:
            return math.inf

    grid = np.geomspace(1e-2, 1e2, 601)
    vals = [fn(w) for w in grid]
    i = int(np.argmin(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    w1 = _golden_min(fn, lo, hi)
    return Su2Excited(float(w1), fn(w1))
