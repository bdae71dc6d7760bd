"""Implicit finite-volume scheme: residual, nonlinear step solve and time marching."""

from zeroflux.solver.config import SolveReport, SolverConfig
from zeroflux.solver.march import Trajectory, march, step_count
from zeroflux.solver.residual import (
    assemble_jacobian,
    assemble_residual,
    face_balance,
    picard_map,
    residual_scale,
    residual_values,
)
from zeroflux.solver.step import init_field, solve_step

__all__ = [
    "SolveReport",
    "SolverConfig",
    "Trajectory",
    "assemble_jacobian",
    "assemble_residual",
    "face_balance",
    "init_field",
    "march",
    "picard_map",
    "residual_scale",
    "residual_values",
    "solve_step",
    "step_count",
]
