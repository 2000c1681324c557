"""The quartic anharmonic oscillator H = -d^2/dx^2 + x^4 and its trial bases.

The Z_2 symmetry splits the problem into even and odd sectors; the level-n
trial function is x^(2n) (even) or x^(2n+1) (odd) times a Gaussian kernel
(``gn`` basis) or a Gaussian-plus-quartic kernel (``gn2`` basis).
"""

from __future__ import annotations

from ..engine import AnsatzFamily
from ..symcore import HamiltonianSpec, IsoGaussian, PolyExp, Polynomial, Quartic1D, WaveFunction

__all__ = ["anharmonic_hamiltonian", "anharmonic_family", "SECTORS", "BASES"]

SECTORS = ("even", "odd")
BASES = ("gn", "gn2")

DEFAULT_OMEGA_BOX = (0.01, 10.0)


def anharmonic_hamiltonian() -> HamiltonianSpec:
    return HamiltonianSpec(1, Polynomial(1, {(4,): 1.0}), label="anharmonic_x4")


def anharmonic_family(sector: str, basis: str) -> AnsatzFamily:
    """Trial family for one parity sector in the chosen kernel basis."""
    if sector not in SECTORS:
        raise ValueError(f"unknown sector {sector!r}; expected one of {SECTORS}")
    if basis not in BASES:
        raise ValueError(f"unknown basis {basis!r}; expected one of {BASES}")
    offset = 0 if sector == "even" else 1

    if basis == "gn":
        def basis_fn(n: int, omega):
            power = 2 * n + offset
            kernel = IsoGaussian(omega[0], 1)
            return WaveFunction(PolyExp(Polynomial.monomial((power,)), kernel))

        box = (DEFAULT_OMEGA_BOX,)
        param_count = 1
    else:
        def basis_fn(n: int, omega):
            power = 2 * n + offset
            kernel = Quartic1D(omega[0], omega[1])
            return WaveFunction(PolyExp(Polynomial.monomial((power,)), kernel))

        box = (DEFAULT_OMEGA_BOX, DEFAULT_OMEGA_BOX)
        param_count = 2

    return AnsatzFamily(
        dim=1,
        param_count=param_count,
        basis_fn=basis_fn,
        param_box=box,
        label=f"anharmonic_{sector}_{basis}",
    )
