"""
Mesh-refinement study: run a config on nested levels and compare consecutive levels.

Per level: one full run directory (level_<i>/) with its own diagnostics.
Between levels l and l+1, with the coarse solution prolonged to the fine
mesh by piecewise-constant injection and both trajectories read on the
union of their time grids:

    l1_cauchy       ||u_l+1 - u_l||_L1(Q)
    phi_l2_cauchy   ||phi(u_l+1) - phi(u_l)||_L2(Q)
    grad_l2_cauchy  ||grad_l+1 phi(u_l+1) - grad_l phi(u_l)||_L2(Q), diamond-wise

When the problem has a closed-form solution, the L1 error at the final
time and the observed order log2(e_l / e_l+1) are added.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from zeroflux.cli.output import prepare_output_dir, write_json
from zeroflux.cli.runner import EXIT_FAILURE, EXIT_OK, RunResult, run
from zeroflux.config.run_config import RunConfig
from zeroflux.config.settings import get_settings
from zeroflux.mesh.mesh import cell_quadrature, cell_sample_points, gradient_at, gradient_field
from zeroflux.problem.model import exact_solution
from zeroflux.solver.march import Trajectory
from zeroflux.utils.errors import InvalidArgumentError
from zeroflux.utils.logger import get_logger

logger = get_logger(__name__)

# sub-samples per fine cell for the gradient comparison; unequal counts keep
# sample points off the diagonals separating diamonds
GRADIENT_SAMPLES = (4, 5)
ERROR_QUADRATURE_ORDER = 4

STUDY_HEADER = (
    "# zeroflux refinement study",
    "# Cauchy columns compare level l with level l-1 (coarse prolonged by injection).",
    "# Without a closed-form solution the study certifies the Cauchy property and",
    "# certificate trends only; exact_l1_error is filled where a closed form exists.",
)


@dataclass
class StudyResult:
    output_dir: Path
    exit_code: int
    table: pd.DataFrame
    runs: List[RunResult] = field(default_factory=list)
    complete: bool = True


# ═══════════════════════════════════════════════════════════════════
# Inter-level comparison
# ═══════════════════════════════════════════════════════════════════

def time_slabs(coarse: Trajectory, fine: Trajectory) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Intervals of the union of both time grids on [0, min(T_c, T_f)]:
    (lengths, coarse level, fine level) with level(t) = min(floor(t / dt) + 1, N).
    """
    end = min(coarse.final_time, fine.final_time)
    breaks = np.concatenate([coarse.times, fine.times, [0.0, end]])
    breaks = np.unique(np.clip(breaks, 0.0, end))
    lengths = np.diff(breaks)
    keep = lengths > 0
    mids = 0.5 * (breaks[:-1] + breaks[1:])[keep]

    def level(traj: Trajectory) -> np.ndarray:
        return np.minimum(np.floor(mids / traj.dt).astype(np.int64) + 1, traj.n_steps)

    return lengths[keep], level(coarse), level(fine)


def prolongation(coarse: Trajectory, fine: Trajectory) -> np.ndarray:
    """Coarse cell containing each fine cell center."""
    return coarse.mesh.locate(fine.mesh.cell_centers)


def cauchy_differences(coarse: Trajectory, fine: Trajectory) -> Dict[str, float]:
    lengths, lc, lf = time_slabs(coarse, fine)
    if lengths.size == 0:
        return {'l1_cauchy': 0.0, 'phi_l2_cauchy': 0.0, 'grad_l2_cauchy': 0.0}
    owner = prolongation(coarse, fine)
    measures = fine.mesh.cell_measures
    problem = fine.problem

    u_c = coarse.values[lc][:, owner]
    u_f = fine.values[lf]
    l1 = float(np.sum(lengths * (np.abs(u_f - u_c) @ measures)))
    phi_diff = problem.phi(u_f) - problem.phi(u_c)
    phi_l2 = float(np.sqrt(np.sum(lengths * ((phi_diff ** 2) @ measures))))

    points, weights = cell_sample_points(fine.mesh, GRADIENT_SAMPLES[: fine.mesh.dimension])
    points = points.reshape(-1, fine.mesh.dimension)
    weights = weights.ravel()
    grad_sq = 0.0
    for length, level_c, level_f in zip(lengths, lc, lf):
        g_c = gradient_field(coarse.mesh, problem.phi(coarse.values[level_c]))
        g_f = gradient_field(fine.mesh, problem.phi(fine.values[level_f]))
        diff = gradient_at(fine.mesh, g_f, points) - gradient_at(coarse.mesh, g_c, points)
        grad_sq += length * float(np.sum(weights * np.sum(diff ** 2, axis=1)))

    return {'l1_cauchy': l1, 'phi_l2_cauchy': phi_l2, 'grad_l2_cauchy': math.sqrt(grad_sq)}


def exact_l1_error(traj: Trajectory) -> Optional[float]:
    """int |u_h(T_N) - u(T_N)| at the final level, or None without a closed form."""
    mesh = traj.mesh
    solution = exact_solution(traj.problem, mesh.domain_lower, mesh.domain_upper)
    if solution is None:
        return None
    points, weights = cell_quadrature(mesh, ERROR_QUADRATURE_ORDER)
    exact = solution(traj.final_time, points.reshape(-1, mesh.dimension)).reshape(mesh.n_cells, -1)
    return float(np.sum(weights * np.abs(traj.values[-1][:, None] - exact)))


# ═══════════════════════════════════════════════════════════════════
# Study
# ═══════════════════════════════════════════════════════════════════

def _run_level(config: RunConfig, directory: Path) -> RunResult:
    return run(config, directory)


def _level_row(level: int, config: RunConfig, result: RunResult) -> Dict[str, Any]:
    row: Dict[str, Any] = {
        'level': level,
        'counts': 'x'.join(str(n) for n in config.mesh.counts),
        'status': result.status,
    }
    traj = result.trajectory
    if traj is not None:
        row.update({'h': traj.mesh.h, 'dt': traj.dt, 'steps': traj.n_steps})
    report = result.diagnostics
    if report is not None:
        row.update({
            'mass_drift': report.mass_drift,
            'entropy_worst': report.entropy_worst_violation,
            'weak_bv': report.weak_bv_value,
            'weak_bv_scaled': report.weak_bv_scaled,
            'l2h1': report.l2h1_value,
            'continuous_entropy_min': report.continuous_entropy_min,
        })
    return row


def _runs(configs: List[RunConfig], directories: List[Path], workers: int) -> List[RunResult]:
    if workers > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(configs))) as pool:
            return list(pool.map(_run_level, configs, directories))
    results = []
    for config, directory in zip(configs, directories):
        result = _run_level(config, directory)
        results.append(result)
        if not result.ok:
            break
    return results


def write_study_csv(path: Path, table: pd.DataFrame, config_hash: str) -> Path:
    with open(path, 'w', encoding='utf-8', newline='') as fh:
        for line in STUDY_HEADER:
            fh.write(line + '\n')
        fh.write(f"# config_hash {config_hash}\n")
        table.to_csv(fh, index=False, float_format=get_settings().csv_float_format)
    return path


def refine_study(config: RunConfig, levels: int, out: Optional[Union[str, Path]] = None,
                 max_workers: Optional[int] = None) -> StudyResult:
    """
    Run `levels` nested refinements of `config` and tabulate per-level
    certificates plus inter-level Cauchy differences.

    Level l is exactly RunConfig.refined(l), so a standalone run of that
    config reproduces the level's trajectory. A failing level ends the
    table there; the exit code is then 1.
    """
    if levels < 2:
        raise InvalidArgumentError(f"a study needs at least 2 levels, got {levels}")
    out_dir = prepare_output_dir(config.resolve_output_dir(out))
    workers = get_settings().max_workers if max_workers is None else max_workers
    configs = [config.refined(level) for level in range(levels)]
    directories = [out_dir / f"level_{level}" for level in range(levels)]
    logger.info(f"Study {config.run_name}: {levels} levels, {workers} worker(s) -> {out_dir}")

    results = _runs(configs, directories, workers)
    first_failure = next((i for i, r in enumerate(results) if not r.ok), None)
    if first_failure is not None:
        results = results[: first_failure + 1]
        logger.error(f"Study aborted at level {first_failure}: {results[-1].error or results[-1].status}")

    rows = []
    errors: List[Optional[float]] = []
    for level, (level_config, result) in enumerate(zip(configs, results)):
        row = _level_row(level, level_config, result)
        ok = result.ok and result.trajectory is not None
        errors.append(exact_l1_error(result.trajectory) if ok else None)
        row['exact_l1_error'] = errors[-1]
        row['observed_order'] = None
        if level > 0 and ok and results[level - 1].ok:
            row.update(cauchy_differences(results[level - 1].trajectory, result.trajectory))
            previous, current = errors[level - 1], errors[level]
            if previous and current:
                row['observed_order'] = math.log2(previous / current)
        rows.append(row)
        logger.info(f"Level {level}: {row}")

    table = pd.DataFrame(rows)
    for column in ('l1_cauchy', 'phi_l2_cauchy', 'grad_l2_cauchy'):
        if column not in table:
            table[column] = np.nan
    complete = first_failure is None and len(results) == levels

    write_study_csv(out_dir / 'study.csv', table, config.config_hash())
    write_json(out_dir / 'study.json', {
        'config_hash': config.config_hash(),
        'levels': levels,
        'complete': complete,
        'rows': table.astype(object).where(table.notna(), None).to_dict(orient='records'),
        'runs': [str(r.output_dir) for r in results],
    })
    exit_code = EXIT_OK if complete else EXIT_FAILURE
    return StudyResult(out_dir, exit_code, table, results, complete)
