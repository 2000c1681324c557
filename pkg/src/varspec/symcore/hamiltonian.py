"""Schroedinger operators with polynomial potentials, applied exactly.

H = scale * (-sum_i d^2/dx_i^2 + V(x)).  Acting on p(x) e^(-phi(x)) gives

    [V p + p (lap phi - |grad phi|^2) + 2 grad p . grad phi - lap p] e^(-phi)

so every kernel family is closed under H and no numerical integration happens
here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .kernels import PolyExp, WaveFunction, as_wavefunction, kernel_exponent_data
from .polynomial import Polynomial

__all__ = ["HamiltonianSpec", "apply_hamiltonian"]


@dataclass(frozen=True, eq=False)
class HamiltonianSpec:
    """-Laplacian plus a polynomial potential, with an optional overall scale."""

    dim: int
    potential: Polynomial
    label: str = ""
    scale: float = 1.0

    def __post_init__(self):
        if self.potential.nvars != self.dim:
            raise ValueError(
                f"potential has {self.potential.nvars} coordinates, expected {self.dim}"
            )


def _apply_to_polyexp(h: HamiltonianSpec, f: PolyExp) -> PolyExp:
    grads, lap_minus_gradsq = kernel_exponent_data(f.kernel)
    p = f.poly
    out = h.potential * p + p * lap_minus_gradsq
    for i in range(h.dim):
        out = out + 2.0 * p.partial(i) * grads[i] - p.partial(i).partial(i)
    if h.scale != 1.0:
        out = out * h.scale
    return PolyExp(out, f.kernel)


def apply_hamiltonian(h: HamiltonianSpec, f) -> WaveFunction:
    """Apply H to a PolyExp or WaveFunction, exactly, over the same kernels."""
    wf = as_wavefunction(f)
    if wf.dim != h.dim:
        raise ValueError(f"operator acts on {h.dim} coordinates, state has {wf.dim}")
    return WaveFunction(tuple(_apply_to_polyexp(h, t) for t in wf.terms))
