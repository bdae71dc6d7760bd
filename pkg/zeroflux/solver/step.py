"""
One implicit step: damped semismooth Newton with a Picard fallback.

Iterates are never projected onto [0, u_max]; if a trial point leaves the
flux domain the line search halves the step instead.
"""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy.sparse.linalg import spsolve

from zeroflux.mesh.mesh import CellField, Mesh
from zeroflux.numflux.schemes import FluxScheme
from zeroflux.problem.model import Problem
from zeroflux.solver.config import SolveReport, SolverConfig
from zeroflux.solver.residual import assemble_jacobian, picard_map, residual_scale, residual_values
from zeroflux.utils.errors import (
    FluxDomainError,
    InvalidArgumentError,
    InvalidInitialDatumError,
    StepFailure,
)

logger = logging.getLogger(__name__)

INITIAL_RANGE_TOL = 1e-12
STATE_RANGE_TOL = 1e-8


def init_field(mesh: Mesh, problem: Problem) -> CellField:
    """u_K^0 = (1/m(K)) int_K u0, exact for the serializable datum kinds."""
    values = np.asarray(problem.initial.cell_averages(mesh), dtype=float)
    low, high = float(values.min()), float(values.max())
    if not np.all(np.isfinite(values)) or low < -INITIAL_RANGE_TOL or high > problem.u_max + INITIAL_RANGE_TOL:
        raise InvalidInitialDatumError(
            f"initial cell averages span [{low}, {high}], outside [0, {problem.u_max}]"
        )
    return CellField(mesh, values, level=0, time=0.0)


def _norm(values: np.ndarray) -> float:
    return float(np.max(np.abs(values))) if values.size else 0.0


def solve_step(mesh: Mesh, problem: Problem, scheme: FluxScheme, u_old: CellField,
               dt: float, config: Optional[SolverConfig] = None,
               initial_guess: Optional[np.ndarray] = None) -> Tuple[CellField, SolveReport]:
    """
    Solve R(u_new) = 0 for the next level.

    Converged means ||R||_inf <= newton_tol * max(1, max_K m(K) u_max / dt).
    Raises StepFailure when Newton and the Picard fallback both fail.
    """
    config = config or SolverConfig()
    if not dt > 0:
        raise InvalidArgumentError(f"time step must be positive, got {dt}")
    old = u_old.values
    if old.min() < -STATE_RANGE_TOL or old.max() > problem.u_max + STATE_RANGE_TOL:
        raise InvalidArgumentError(
            f"previous level spans [{old.min()}, {old.max()}], outside [0, {problem.u_max}]"
        )

    step = u_old.level + 1
    target = config.newton_tol * residual_scale(mesh, problem, dt)

    def residual(v: np.ndarray) -> np.ndarray:
        return residual_values(mesh, problem, scheme, old, v, dt)

    v = (old if initial_guess is None else np.asarray(initial_guess, dtype=float)).copy()
    try:
        R = residual(v)
    except FluxDomainError:
        logger.debug(f"Step {step}: initial guess outside the flux domain, restarting from u_old")
        v = old.copy()
        R = residual(v)
    norm = _norm(R)
    report = SolveReport(step=step, iterations=0, final_residual=norm,
                         residual_target=target, residual_history=[norm])

    # ── Newton ──────────────────────────────────────────────────────
    while norm > target and report.iterations < config.max_newton_iters:
        J = assemble_jacobian(mesh, problem, scheme, v, dt, config.phi_kink_regularization)
        delta = np.atleast_1d(spsolve(J, -R))
        if not np.all(np.isfinite(delta)):
            logger.debug(f"Step {step}: singular Newton matrix")
            break

        t = 1.0
        accepted = False
        for _ in range(config.max_line_search_halvings + 1):
            trial = v + t * delta
            try:
                R_trial = residual(trial)
            except FluxDomainError:
                t *= config.line_search_factor
                report.line_search_halvings += 1
                continue
            trial_norm = _norm(R_trial)
            if trial_norm < norm or trial_norm <= target:
                accepted = True
                break
            t *= config.line_search_factor
            report.line_search_halvings += 1

        if not accepted:
            logger.debug(f"Step {step}: line search stalled at residual {norm:.3e}")
            break
        v, R, norm = trial, R_trial, trial_norm
        report.iterations += 1
        report.residual_history.append(norm)
        logger.debug(f"Step {step}: Newton iteration {report.iterations}, residual {norm:.3e}, step {t:g}")

    # ── Picard fallback: v <- (1 - omega) v + omega P(v) ───────────
    if norm > target and config.picard_fallback:
        logger.warning(f"Step {step}: Newton stalled at residual {norm:.3e}, switching to Picard")
        report.fallback_used = True
        omega = 1.0
        for _ in range(config.max_picard_iters):
            if norm <= target or omega < 1e-12:
                break
            fixed_point = picard_map(mesh, problem, scheme, old, v, dt)
            trial = (1.0 - omega) * v + omega * fixed_point
            try:
                R_trial = residual(trial)
            except FluxDomainError:
                omega *= 0.5
                continue
            trial_norm = _norm(R_trial)
            if trial_norm > norm:
                omega *= 0.5
                continue
            v, R, norm = trial, R_trial, trial_norm
            report.picard_iterations += 1
            report.residual_history.append(norm)

    report.final_residual = norm
    if norm > target:
        report.converged = False
        dump = {
            'step': step,
            'dt': dt,
            'residual': norm,
            'target': target,
            'newton_iterations': report.iterations,
            'picard_iterations': report.picard_iterations,
            'fallback_used': report.fallback_used,
            'residual_history': list(report.residual_history),
            'iterate_min': float(v.min()),
            'iterate_max': float(v.max()),
        }
        logger.error(f"Step {step} failed: residual {norm:.3e} > target {target:.3e}")
        raise StepFailure(f"nonlinear solve failed at step {step}", dump)

    return CellField(mesh, v, level=step, time=step * dt), report
