"""Recursive variational orthogonalization and the outer residual minimization.

Two schemes build a tower of mutually orthogonal trial states:

* scheme 1: every basis member is re-evaluated at the current level's
  parameters and the mixing coefficients come from a linear (Gram) system;
* scheme 2: previously frozen states are mixed in, so each coefficient has
  the closed form c = -<f_n, psi_l> / ||psi_l||^2.

For each level the nonlinear parameters minimize the energy variance
<H^2> - <H>^2 (the E-minimum of the squared residual norm), located by a
log-spaced multistart grid plus Nelder-Mead simplex refinement.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from .quad import QuadratureError
from .symcore import (
    HamiltonianSpec,
    WaveFunction,
    as_wavefunction,
    functional_triple,
    inner_product,
)

__all__ = [
    "Method",
    "Objective",
    "AnsatzFamily",
    "SolverConfig",
    "SpectrumEstimate",
    "DegenerateBasisError",
    "SolverError",
    "orthogonalize_m1",
    "orthogonalize_m2",
    "solve_level",
    "solve_tower",
    "error_bound_check",
]

GRAM_CONDITION_LIMIT = 1e12


class Method(Enum):
    M1 = "m1"
    M2 = "m2"


class Objective(Enum):
    RESIDUAL_NORM = "residual"            # minimize <H^2> - <H>^2 at every level
    RAYLEIGH_GROUND_STATE = "rayleigh_ground"  # minimize <H> at level 0 only
    RAYLEIGH_QUOTIENT = "rayleigh"        # minimize <H> at every level


class DegenerateBasisError(RuntimeError):
    """Gram system singular or ill-conditioned at the candidate parameters."""


class SolverError(RuntimeError):
    """Level optimization failed; carries the failing level index."""

    def __init__(self, message: str, level: int | None = None):
        super().__init__(message)
        self.level = level


@dataclass(frozen=True)
class AnsatzFamily:
    """An indexed set of trial functions f_n(x; omega).

    ``basis_fn(n, omega)`` returns the level-n member at parameter vector
    ``omega``; ``param_box`` bounds the multistart search per parameter;
    ``start_hints`` adds per-level extra multistart seeds for landscapes with
    basins the default grid would miss.
    """

    dim: int
    param_count: int
    basis_fn: Callable[[int, Sequence[float]], WaveFunction]
    param_box: tuple[tuple[float, float], ...]
    label: str = ""
    start_hints: dict[int, tuple[tuple[float, ...], ...]] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.param_box) != self.param_count:
            raise ValueError("param_box length must equal param_count")
        for lo, hi in self.param_box:
            if not (0 < lo < hi):
                raise ValueError(f"invalid parameter interval ({lo}, {hi})")

    def member(self, n: int, omega: Sequence[float]) -> WaveFunction:
        return as_wavefunction(self.basis_fn(n, tuple(omega)))


@dataclass(frozen=True)
class SolverConfig:
    method: Method = Method.M2
    objective: Objective = Objective.RESIDUAL_NORM
    grid_density: int = 5          # multistart points per parameter dimension
    refine_top: int = 3            # simplex refinements from the best starts
    xatol: float = 1e-6
    fatol: float = 1e-10
    maxfev: int = 2000
    ortho_tol: float = 1e-8
    threads: int | None = None     # None: VARSPEC_THREADS, else hardware default

    def __post_init__(self):
        if self.grid_density < 1 or self.refine_top < 1:
            raise ValueError("grid_density and refine_top must be >= 1")
        if min(self.xatol, self.fatol, self.ortho_tol) <= 0:
            raise ValueError("tolerances must be > 0")


@dataclass(frozen=True)
class SpectrumEstimate:
    """One level's output: energy, residual norm, parameters, mixing, state."""

    level: int
    energy: float
    residual: float
    omega: tuple[float, ...]
    coeffs: tuple[float, ...]
    state: WaveFunction
    norm_sq: float
    ortho_defect: float = 0.0


def thread_count(requested: int | None = None) -> int:
    """Worker cap: explicit argument, then VARSPEC_THREADS, then hardware."""
    if requested is not None:
        return max(1, int(requested))
    env = os.environ.get("VARSPEC_THREADS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ValueError(f"VARSPEC_THREADS must be an integer, got {env!r}") from exc
    return os.cpu_count() or 1


# --- orthogonalization ------------------------------------------------------


def _combine(members: Sequence[WaveFunction], coeffs: Sequence[float], tail: WaveFunction) -> WaveFunction:
    terms = []
    for c, m in zip(coeffs, members):
        if c != 0.0:
            terms.extend(m.scaled(c).terms)
    terms.extend(tail.terms)
    return WaveFunction(tuple(terms))


def _orthogonalize_m1_full(
    n: int,
    omega: Sequence[float],
    family: AnsatzFamily,
    frozen: Sequence[SpectrumEstimate],
) -> tuple[WaveFunction, tuple[float, ...], np.ndarray]:
    if len(frozen) != n:
        raise ValueError(f"level {n} needs exactly {n} frozen states, got {len(frozen)}")
    members = [family.member(l, omega) for l in range(n + 1)]
    if n == 0:
        return members[0], (), np.zeros(0)
    gram = np.empty((n, n))
    rhs = np.empty(n)
    for j, est in enumerate(frozen):
        for l in range(n):
            gram[j, l] = inner_product(est.state, members[l])
        rhs[j] = -inner_product(est.state, members[n])
    if not np.all(np.isfinite(gram)) or not np.all(np.isfinite(rhs)):
        raise DegenerateBasisError(f"non-finite Gram entries at omega={tuple(omega)}")
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond) or cond > GRAM_CONDITION_LIMIT:
        raise DegenerateBasisError(
            f"Gram condition {cond:.3e} above {GRAM_CONDITION_LIMIT:.0e} at omega={tuple(omega)}"
        )
    coeffs = np.linalg.solve(gram, rhs)
    defects = np.abs(gram @ coeffs - rhs)  # |<psi_j, psi_n>| up to solve roundoff
    psi = _combine(members[:n], coeffs, members[n])
    return psi, tuple(float(c) for c in coeffs), defects


def orthogonalize_m1(
    n: int,
    omega: Sequence[float],
    family: AnsatzFamily,
    frozen: Sequence[SpectrumEstimate],
) -> WaveFunction:
    """Scheme-1 state: all n+1 basis members at the same candidate omega,
    mixing coefficients solved from <psi_j(frozen), psi_n> = 0."""
    psi, _, _ = _orthogonalize_m1_full(n, omega, family, frozen)
    return psi


def _orthogonalize_m2_full(
    n: int,
    omega: Sequence[float],
    family: AnsatzFamily,
    frozen: Sequence[SpectrumEstimate],
) -> tuple[WaveFunction, tuple[float, ...]]:
    if len(frozen) != n:
        raise ValueError(f"level {n} needs exactly {n} frozen states, got {len(frozen)}")
    fn = family.member(n, omega)
    coeffs = []
    for est in frozen:
        assert est.norm_sq > 0, "frozen state with nonpositive norm"
        coeffs.append(-inner_product(fn, est.state) / est.norm_sq)
    psi = _combine([est.state for est in frozen], coeffs, fn)
    return psi, tuple(coeffs)


def orthogonalize_m2(
    n: int,
    omega: Sequence[float],
    family: AnsatzFamily,
    frozen: Sequence[SpectrumEstimate],
) -> WaveFunction:
    """Scheme-2 state: frozen states mixed into f_n(omega) with the closed
    coefficients c_nl = -<f_n, psi_l> / ||psi_l||^2 (no linear solve)."""
    psi, _ = _orthogonalize_m2_full(n, omega, family, frozen)
    return psi


# --- per-level optimization --------------------------------------------------


@dataclass
class _Candidate:
    value: float
    omega: tuple[float, ...]


def _build_state(n, omega, family, frozen, method):
    if method is Method.M1:
        psi, coeffs, defects = _orthogonalize_m1_full(n, omega, family, frozen)
    else:
        psi, coeffs = _orthogonalize_m2_full(n, omega, family, frozen)
        defects = np.zeros(n)
    return psi, coeffs, defects


def _grid_starts(family: AnsatzFamily, density: int, hints) -> list[tuple[float, ...]]:
    axes = [np.geomspace(lo, hi, density) for lo, hi in family.param_box]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    starts = [tuple(float(v) for v in row) for row in pts]
    starts.extend(tuple(float(v) for v in h) for h in hints)
    return starts


def solve_level(
    n: int,
    h: HamiltonianSpec,
    family: AnsatzFamily,
    frozen: Sequence[SpectrumEstimate],
    cfg: SolverConfig = SolverConfig(),
) -> SpectrumEstimate:
    """Minimize the level-n energy variance over omega and return the estimate.

    E is eliminated analytically (it equals the Rayleigh quotient at the
    optimum), so only the nonlinear parameters are searched: a log grid over
    the parameter box, then simplex refinement from the best starts.  With
    ``Objective.RAYLEIGH_GROUND_STATE`` and n = 0 the energy expectation is
    minimized instead and R is reported at that minimizer.
    """
    rayleigh_mode = cfg.objective is Objective.RAYLEIGH_QUOTIENT or (
        cfg.objective is Objective.RAYLEIGH_GROUND_STATE and n == 0
    )

    def evaluate(omega: tuple[float, ...]) -> float:
        try:
            psi, _, _ = _build_state(n, omega, family, frozen, cfg.method)
            s, hm, hh = functional_triple(psi, h)
        except (DegenerateBasisError, QuadratureError, ValueError, FloatingPointError):
            return math.inf
        if not (s > 0 and np.isfinite(s) and np.isfinite(hm) and np.isfinite(hh)):
            return math.inf
        e_opt = hm / s
        value = e_opt if rayleigh_mode else hh / s - e_opt * e_opt
        return value if np.isfinite(value) else math.inf

    hints = list(family.start_hints.get(n, ()))
    if frozen:
        # continuation seed: towers usually drift smoothly in parameter space
        hints.append(frozen[-1].omega)
    starts = _grid_starts(family, cfg.grid_density, hints)
    workers = thread_count(cfg.threads)
    if workers > 1 and len(starts) > 8:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(evaluate, starts))
    else:
        values = [evaluate(s) for s in starts]

    ranked = sorted(
        (_Candidate(v, s) for v, s in zip(values, starts) if math.isfinite(v)),
        key=lambda c: (c.value, float(np.linalg.norm(c.omega)), c.omega),
    )
    if not ranked:
        raise SolverError(f"all {len(starts)} starts infeasible at level {n}", level=n)

    log_bounds = [(math.log(lo), math.log(hi)) for lo, hi in family.param_box]

    def log_objective(z: np.ndarray) -> float:
        return evaluate(tuple(float(v) for v in np.exp(z)))

    candidates: list[_Candidate] = []
    for cand in ranked[: cfg.refine_top]:
        z0 = np.log(np.asarray(cand.omega))
        res = minimize(
            log_objective,
            z0,
            method="Nelder-Mead",
            bounds=log_bounds,
            options={
                "xatol": cfg.xatol,
                "fatol": cfg.fatol,
                "maxfev": cfg.maxfev,
                "disp": False,
            },
        )
        omega = tuple(float(v) for v in np.exp(res.x))
        value = evaluate(omega)
        if math.isfinite(value):
            candidates.append(_Candidate(value, omega))
        if math.isfinite(cand.value):
            candidates.append(cand)
    best = min(candidates, key=lambda c: (c.value, float(np.linalg.norm(c.omega)), c.omega))

    psi, coeffs, defects = _build_state(n, best.omega, family, frozen, cfg.method)
    s, hm, hh = functional_triple(psi, h)
    if not (s > 0 and np.isfinite(s)):
        raise SolverError(f"non-finite state at optimum omega={best.omega}", level=n)
    energy = hm / s
    r_sq = hh / s - energy * energy
    defect = 0.0
    for j, est in enumerate(frozen):
        rel = defects[j] / math.sqrt(est.norm_sq * s)
        defect = max(defect, rel)
        if rel >= cfg.ortho_tol:
            raise SolverError(
                f"orthogonality defect {rel:.3e} above {cfg.ortho_tol:.0e} "
                f"against level {est.level}",
                level=n,
            )
    return SpectrumEstimate(
        level=n,
        energy=float(energy),
        residual=math.sqrt(max(r_sq, 0.0)),
        omega=best.omega,
        coeffs=coeffs,
        state=psi,
        norm_sq=float(s),
        ortho_defect=float(defect),
    )


def solve_tower(
    levels: int,
    h: HamiltonianSpec,
    family: AnsatzFamily,
    cfg: SolverConfig = SolverConfig(),
) -> list[SpectrumEstimate]:
    """Solve levels 0..levels-1 recursively, freezing each result.

    Energies are returned in level order; monotonicity is not asserted (the
    construction does not guarantee it).
    """
    if levels < 1:
        raise ValueError("levels must be >= 1")
    frozen: list[SpectrumEstimate] = []
    for n in range(levels):
        try:
            frozen.append(solve_level(n, h, family, frozen, cfg))
        except SolverError:
            raise
        except Exception as exc:
            raise SolverError(f"level {n} failed: {exc}", level=n) from exc
    return frozen


def error_bound_check(est: SpectrumEstimate, reference: float) -> bool:
    """|reference - E_approx| <= R, the generic eigenvalue error bound."""
    return abs(reference - est.energy) <= est.residual
