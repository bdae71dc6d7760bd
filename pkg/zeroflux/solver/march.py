"""
Time marching of the implicit scheme.

Usage:
    mesh = build_interval_mesh(0.0, 1.0, 100)
    problem = preset('burgers_degenerate')
    traj = march(mesh, problem, GodunovFlux(problem), dt=mesh.h)
    traj.values[-1]     # u^N
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from zeroflux.mesh.mesh import CellField, Mesh
from zeroflux.numflux.schemes import FluxScheme
from zeroflux.problem.model import Problem
from zeroflux.solver.config import SolveReport, SolverConfig
from zeroflux.solver.step import init_field, solve_step
from zeroflux.utils.errors import InvalidArgumentError, StepFailure
from zeroflux.utils.logger import get_logger

logger = get_logger(__name__)

LevelCallback = Callable[[CellField, Optional[SolveReport]], None]


def step_count(T: float, dt: float) -> int:
    """First n with n dt >= T (a relative 1e-9 absorbs T/dt rounding)."""
    return max(1, int(np.ceil(T / dt * (1.0 - 1e-9))))


@dataclass
class Trajectory:
    """All time levels u^0 .. u^N of one run, piecewise constant on (n dt, (n+1) dt]."""
    mesh: Mesh
    problem: Problem
    scheme: FluxScheme
    dt: float
    fields: List[CellField] = field(default_factory=list)
    reports: List[SolveReport] = field(default_factory=list)
    config: Optional[SolverConfig] = None

    @property
    def n_levels(self) -> int:
        return len(self.fields)

    @property
    def n_steps(self) -> int:
        return max(len(self.fields) - 1, 0)

    @property
    def final_time(self) -> float:
        return self.n_steps * self.dt

    @property
    def values(self) -> np.ndarray:
        """(levels, cells) array."""
        return np.stack([f.values for f in self.fields])

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_levels) * self.dt

    def total_mass(self) -> np.ndarray:
        return self.values @ self.mesh.cell_measures

    def summary(self) -> Dict[str, Any]:
        return {
            'dt': self.dt,
            'steps': self.n_steps,
            'final_time': self.final_time,
            'newton_iterations': int(sum(r.iterations for r in self.reports)),
            'fallback_steps': int(sum(r.fallback_used for r in self.reports)),
            'max_final_residual': max((r.final_residual for r in self.reports), default=0.0),
        }


def march(mesh: Mesh, problem: Problem, scheme: FluxScheme, dt: float,
          config: Optional[SolverConfig] = None,
          callback: Optional[LevelCallback] = None,
          initial: Optional[CellField] = None) -> Trajectory:
    """
    Advance from u^0 until the first level with n dt >= T.

    On a step failure the StepFailure carries the partial trajectory in
    `exc.trajectory`.
    """
    if not dt > 0:
        raise InvalidArgumentError(f"time step must be positive, got {dt}")
    config = config or SolverConfig()
    u = initial if initial is not None else init_field(mesh, problem)
    traj = Trajectory(mesh=mesh, problem=problem, scheme=scheme, dt=dt,
                      fields=[u], config=config)
    if callback:
        callback(u, None)

    n_steps = step_count(problem.T, dt)
    logger.info(
        f"Marching {problem.name} with {scheme.name}: {mesh.n_cells} cells, "
        f"dt={dt:.4g}, {n_steps} steps"
    )
    for n in range(n_steps):
        try:
            u, report = solve_step(mesh, problem, scheme, u, dt, config)
        except StepFailure as exc:
            exc.trajectory = traj
            logger.error(f"March aborted at step {n + 1}/{n_steps}; {traj.n_levels} levels kept")
            raise
        traj.fields.append(u)
        traj.reports.append(report)
        if report.fallback_used:
            logger.warning(f"Step {report.step} needed the Picard fallback")
        logger.debug(
            f"Step {report.step}: {report.iterations} Newton iterations, "
            f"residual {report.final_residual:.3e}"
        )
        if callback:
            callback(u, report)

    logger.info(f"March finished: {traj.summary()}")
    return traj
