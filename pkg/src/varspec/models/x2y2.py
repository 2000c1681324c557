"""The planar model H = -d^2/dx^2 - d^2/dy^2 + x^2 y^2 and its C4v sectors.

Trial states are sector prefactor polynomials times the two-term density

    rho(x, y; w) = e^(-w1 y^2 - w2 x^2 - w3 x^2 y^2)
                 + e^(-w1 x^2 - w2 y^2 - w3 x^2 y^2),

which is symmetric under x <-> y by construction.  Prefactors: EEE uses
1, x^2 + y^2, x^4 + y^4, ...; EEO uses x^2 - y^2, x^4 - y^4, ... (odd under
the diagonal reflection).  The other C4v sectors are not parameterized.
"""

from __future__ import annotations

from ..engine import AnsatzFamily, Method
from ..symcore import CoupledXY, HamiltonianSpec, PolyExp, Polynomial, WaveFunction

__all__ = ["x2y2_hamiltonian", "x2y2_density", "x2y2_family", "SECTORS"]

SECTORS = ("EEE", "EEO")

# the near-degenerate w2 ~ 1e-8 basin needs the wide lower edge
PARAM_BOX = ((1e-9, 10.0),) * 3

# known minimizer basins of the three-parameter scheme-1 EEE landscape; the
# default grid misses the w2 -> 0 valley of level 0
_EEE_M1_HINTS = {
    0: ((0.264, 1e-8, 0.142),),
    1: ((0.943, 0.161, 0.080),),
    2: ((0.157, 0.736, 0.073),),
}


def x2y2_hamiltonian() -> HamiltonianSpec:
    return HamiltonianSpec(2, Polynomial(2, {(2, 2): 1.0}), label="x2y2")


def x2y2_density(omega) -> WaveFunction:
    """The symmetrized two-kernel density rho(x, y; omega)."""
    w1, w2, w3 = (float(v) for v in omega)
    if min(w1, w2, w3) < 0:
        raise ValueError(f"density parameters must be >= 0, got {omega}")
    if max(w1, w2, w3) <= 0:
        raise ValueError("density parameters all zero: not normalizable")
    one = Polynomial.constant(1.0, 2)
    return WaveFunction(
        (
            PolyExp(one, CoupledXY(a=w1, b=w2, c=w3)),
            PolyExp(one, CoupledXY(a=w2, b=w1, c=w3)),
        )
    )


def _prefactor(sector: str, n: int) -> Polynomial:
    if sector == "EEE":
        if n == 0:
            return Polynomial.constant(1.0, 2)
        return Polynomial(2, {(2 * n, 0): 1.0, (0, 2 * n): 1.0})
    # EEO: antisymmetric under the diagonal reflection
    return Polynomial(2, {(2 * n + 2, 0): 1.0, (0, 2 * n + 2): -1.0})


def x2y2_family(sector: str, method: Method = Method.M2) -> AnsatzFamily:
    """Sector family: level-n prefactor polynomial times the density."""
    if sector not in SECTORS:
        raise ValueError(f"unsupported sector {sector!r}; parameterized sectors: {SECTORS}")

    def basis_fn(n: int, omega):
        pref = _prefactor(sector, n)
        rho = x2y2_density(omega)
        return WaveFunction(tuple(PolyExp(pref * t.poly, t.kernel) for t in rho.terms))

    hints = _EEE_M1_HINTS if (sector == "EEE" and method is Method.M1) else {}
    return AnsatzFamily(
        dim=2,
        param_count=3,
        basis_fn=basis_fn,
        param_box=PARAM_BOX,
        label=f"x2y2_{sector}_{method.value}",
        start_hints=hints,
    )
