"""Exact polynomial algebra over exponential kernels, and its functionals."""

from .polynomial import MultiIndex, Polynomial, poly_add, poly_mul, poly_partial
from .kernels import (
    CoupledXY,
    ExpKernel,
    IsoGaussian,
    PolyExp,
    Quartic1D,
    WaveFunction,
    as_wavefunction,
)
from .moments import gaussian_moment, gaussian_moment_array
from .hamiltonian import HamiltonianSpec, apply_hamiltonian
from .products import (
    UnsupportedKernelPairError,
    functional_triple,
    inner_product,
    norm_sq,
    rayleigh,
    residual_sq,
    variance_objective,
)

__all__ = [
    "MultiIndex",
    "Polynomial",
    "poly_add",
    "poly_mul",
    "poly_partial",
    "IsoGaussian",
    "Quartic1D",
    "CoupledXY",
    "ExpKernel",
    "PolyExp",
    "WaveFunction",
    "as_wavefunction",
    "gaussian_moment",
    "gaussian_moment_array",
    "HamiltonianSpec",
    "apply_hamiltonian",
    "UnsupportedKernelPairError",
    "functional_triple",
    "inner_product",
    "norm_sq",
    "rayleigh",
    "residual_sq",
    "variance_objective",
]
