"""Concrete Hamiltonians, symmetry sectors, and trial families."""

from .anharmonic import anharmonic_family, anharmonic_hamiltonian
from .su2 import (
    Su2Analytic,
    Su2Asymptotics,
    Su2Excited,
    Su2Ground,
    su2_analytic,
    su2_excited_closed_form,
    su2_family,
    su2_ground_closed_form,
    su2_hamiltonian,
    su2_large_d_asymptotics,
    su2_potential,
)
from .x2y2 import x2y2_density, x2y2_family, x2y2_hamiltonian

__all__ = [
    "anharmonic_family",
    "anharmonic_hamiltonian",
    "x2y2_density",
    "x2y2_family",
    "x2y2_hamiltonian",
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
