"""
DiagnosticsReport: every certificate of a trajectory in one JSON-ready record.

Usage:
    report = compute_diagnostics(traj)                    # default options
    report = compute_diagnostics(traj, DiagnosticsOptions(weak_bv=False))
    json.dump(report.to_dict(), fh, indent=2)
"""

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from zeroflux.diagnostics.entropy import continuous_entropy_functional, entropy_residual
from zeroflux.diagnostics.functionals import (
    gradient_l2_norm_sq,
    l2h1_functional,
    linf_bounds,
    mass_drift,
    mass_drift_bound,
    mass_series,
    space_translate_functional,
    time_translate_functional,
    weak_bv_functional,
)
from zeroflux.diagnostics.testfunctions import TestFunction, default_test_functions
from zeroflux.numflux.schemes import EntropyKind
from zeroflux.solver.march import Trajectory
from zeroflux.utils.errors import InvalidArgumentError
from zeroflux.utils.logger import get_logger

logger = get_logger(__name__)

BOX_TOL = 1e-8


def k_grid(u_c: float, u_max: float, size: int = 33) -> np.ndarray:
    """
    size uniform points on [0, u_max] plus {0, u_c, u_max}, sorted and de-duplicated.

    0 and u_max are always on the uniform grid, and so is u_c when it is a
    multiple of u_max / (size - 1): k_grid(0.5, 1.0, 33) has 33 points,
    k_grid(0.37, 1.0, 33) has 34. Dropped duplicates repeat a k already
    sampled, so the worst entropy residual over the grid is unchanged.
    """
    if size < 2:
        raise InvalidArgumentError(f"k grid needs at least 2 points, got {size}")
    return np.unique(np.concatenate([np.linspace(0.0, u_max, size), [0.0, u_c, u_max]]))


@dataclass
class DiagnosticsOptions:
    """Which certificates to compute and where to sample them."""
    k_grid_size: int = 33
    entropy_kinds: Tuple[str, ...] = ('sub', 'super', 'full')
    space_offsets: Tuple[float, ...] = (1.0, 0.5, 0.25)  # multiples of h
    space_direction: Optional[Tuple[float, ...]] = None  # unit vector, default e_1
    time_offsets: Tuple[float, ...] = (1.0, 2.0, 4.0)  # multiples of dt
    entropy_levels: Tuple[float, ...] = (0.1, 0.3, 0.7)  # k for the continuous functional
    test_functions: Optional[Sequence[TestFunction]] = None  # None -> default_test_functions
    weak_bv: bool = True
    translates: bool = True
    continuous_entropy: bool = True

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['test_functions'] = (
            None if self.test_functions is None else [t.to_dict() for t in self.test_functions]
        )
        return data


@dataclass
class DiagnosticsReport:
    h: float
    dt: float
    steps: int
    linf_min: float
    linf_max: float
    linf_within_box: bool
    mass_drift: float
    mass_drift_bound: float
    mass_within_bound: bool
    entropy_worst_violation: float
    entropy_worst_by_kind: Dict[str, float] = field(default_factory=dict)
    k_grid: List[float] = field(default_factory=list)
    weak_bv_value: float = 0.0
    weak_bv_scaled: float = 0.0
    l2h1_value: float = 0.0
    gradient_l2_value: float = 0.0
    translate_space: List[Tuple[float, float]] = field(default_factory=list)
    translate_time: List[Tuple[float, float]] = field(default_factory=list)
    continuous_entropy_min: float = 0.0
    continuous_entropy_values: List[Dict[str, Any]] = field(default_factory=list)
    mass_series: List[float] = field(default_factory=list)

    def all_finite(self) -> bool:
        scalars = [
            self.linf_min, self.linf_max, self.mass_drift, self.entropy_worst_violation,
            self.weak_bv_value, self.weak_bv_scaled, self.l2h1_value, self.continuous_entropy_min,
        ]
        pairs = [v for pair in self.translate_space + self.translate_time for v in pair]
        return all(math.isfinite(v) for v in scalars + pairs)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['translate_space'] = [list(p) for p in self.translate_space]
        data['translate_time'] = [list(p) for p in self.translate_time]
        return data


def compute_diagnostics(traj: Trajectory, options: Optional[DiagnosticsOptions] = None) -> DiagnosticsReport:
    options = options or DiagnosticsOptions()
    mesh, problem = traj.mesh, traj.problem
    u_max = problem.u_max

    low, high = linf_bounds(traj)
    drift = mass_drift(traj)
    drift_bound = mass_drift_bound(traj)

    ks = k_grid(problem.u_c, u_max, options.k_grid_size)
    by_kind: Dict[str, float] = {}
    for kind in options.entropy_kinds:
        kind = EntropyKind(kind)
        by_kind[kind.value] = max(entropy_residual(traj, float(k), kind) for k in ks)
    worst = max(by_kind.values(), default=0.0)

    report = DiagnosticsReport(
        h=mesh.h,
        dt=traj.dt,
        steps=traj.n_steps,
        linf_min=low,
        linf_max=high,
        linf_within_box=bool(low >= -BOX_TOL and high <= u_max + BOX_TOL),
        mass_drift=drift,
        mass_drift_bound=drift_bound,
        mass_within_bound=bool(drift <= drift_bound),
        entropy_worst_violation=worst,
        entropy_worst_by_kind=by_kind,
        k_grid=[float(k) for k in ks],
        mass_series=mass_series(traj),
    )

    report.l2h1_value = l2h1_functional(traj)
    report.gradient_l2_value = gradient_l2_norm_sq(traj)

    if options.weak_bv:
        report.weak_bv_value = weak_bv_functional(traj)
        report.weak_bv_scaled = report.weak_bv_value * float(np.sqrt(mesh.h))

    if options.translates and traj.n_steps > 0:
        direction = np.zeros(mesh.dimension)
        if options.space_direction is None:
            direction[0] = 1.0
        else:
            direction[:] = options.space_direction
            direction /= np.linalg.norm(direction)
        for factor in options.space_offsets:
            length = factor * mesh.h
            if length < mesh.domain_diameter:
                report.translate_space.append(
                    (length, space_translate_functional(traj, length * direction))
                )
        for factor in options.time_offsets:
            tau = factor * traj.dt
            if 0.0 < tau < traj.final_time:
                report.translate_time.append((tau, time_translate_functional(traj, tau)))

    if options.continuous_entropy and traj.n_steps > 0:
        tests = options.test_functions or default_test_functions(
            traj.final_time, mesh.domain_lower, mesh.domain_upper
        )
        values = []
        for k in options.entropy_levels:
            k = min(max(float(k), 0.0), u_max)
            for test in tests:
                value = continuous_entropy_functional(traj, k, test)
                values.append({'k': k, 'test': test.label, 'value': value})
        report.continuous_entropy_values = values
        report.continuous_entropy_min = min((v['value'] for v in values), default=0.0)

    logger.info(
        f"Diagnostics: linf=[{low:.3e}, {high:.3e}] drift={drift:.3e} "
        f"entropy_worst={worst:.3e} weak_bv={report.weak_bv_value:.4g} l2h1={report.l2h1_value:.4g}"
    )
    return report
