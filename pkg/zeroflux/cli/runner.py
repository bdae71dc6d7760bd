"""
Single-run driver: march a configured problem, certify it, write the run directory.

Run directory layout:
    state_<step>.csv     cell_id, x[, y], u, phi (every dump_stride levels, plus the last)
    diagnostics.json     DiagnosticsReport plus the hard-invariant verdicts
    manifest.json        version, config + hash, problem/mesh/scheme, step reports, status

Exit status: 0 on success, 1 when a step failed or a hard invariant
(mass drift within its bound, values inside [-1e-8, u_max + 1e-8]) is violated.
"""

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from zeroflux import __version__
from zeroflux.cli.output import StateWriter, prepare_output_dir, write_json
from zeroflux.config.run_config import RunConfig
from zeroflux.config.settings import get_settings
from zeroflux.diagnostics.functionals import linf_bounds, mass_drift, mass_drift_bound
from zeroflux.diagnostics.report import BOX_TOL, DiagnosticsReport, compute_diagnostics
from zeroflux.mesh.export import mesh_summary
from zeroflux.solver.march import LevelCallback, Trajectory, march, step_count
from zeroflux.utils.errors import ConfigError, InvalidInitialDatumError, StepFailure
from zeroflux.utils.logger import get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


@dataclass
class RunResult:
    output_dir: Path
    exit_code: int
    status: str
    trajectory: Optional[Trajectory] = None
    diagnostics: Optional[DiagnosticsReport] = None
    invariants: Dict[str, Any] = field(default_factory=dict)
    files: List[Path] = field(default_factory=list)
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.exit_code == EXIT_OK


def simulate(config: RunConfig, callback: Optional[LevelCallback] = None) -> Trajectory:
    """Build problem, mesh and scheme from the config and march to T."""
    problem = config.build_problem()
    mesh = config.build_mesh()
    scheme = config.build_scheme(problem)
    dt = config.resolve_dt(mesh)
    try:
        return march(mesh, problem, scheme, dt, config.solver.build(), callback=callback)
    except InvalidInitialDatumError as e:
        raise ConfigError("invalid initial datum", [('problem.u0', str(e))]) from e


def hard_invariants(traj: Trajectory) -> Dict[str, Any]:
    low, high = linf_bounds(traj)
    drift = mass_drift(traj)
    bound = mass_drift_bound(traj)
    u_max = traj.problem.u_max
    box_ok = bool(low >= -BOX_TOL and high <= u_max + BOX_TOL)
    mass_ok = bool(drift <= bound)
    return {
        'linf_min': low,
        'linf_max': high,
        'linf_within_box': box_ok,
        'mass_drift': drift,
        'mass_drift_bound': bound,
        'mass_within_bound': mass_ok,
        'pass': box_ok and mass_ok,
    }


def _manifest(config: RunConfig, traj: Optional[Trajectory], status: str,
              invariants: Dict[str, Any], files: List[Path], started: float,
              failure: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    problem = config.build_problem()
    mesh = traj.mesh if traj is not None else config.build_mesh()
    dt = config.resolve_dt(mesh)
    manifest: Dict[str, Any] = {
        'version': __version__,
        'status': status,
        'config_hash': config.config_hash(),
        'config': config.canonical(),
        'problem': problem.describe(),
        'mesh': mesh_summary(mesh),
        'scheme': config.build_scheme(problem).describe(),
        'dt': dt,
        'steps_planned': step_count(problem.T, dt),
        'steps_completed': traj.n_steps if traj is not None else 0,
        'solver': config.solver.build().to_dict(),
        'step_reports': [r.to_dict() for r in traj.reports] if traj is not None else [],
        'invariants': invariants,
        'files': sorted(p.name for p in files),
    }
    if traj is not None:
        manifest['summary'] = traj.summary()
    if failure is not None:
        manifest['failure'] = failure
    if get_settings().record_wall_time:
        manifest['wall_time_seconds'] = time.perf_counter() - started
    return manifest


def run(config: RunConfig, out: Optional[Union[str, Path]] = None) -> RunResult:
    """
    Execute one run and write its directory.

    ConfigError propagates (exit status 2 at the command line); a
    StepFailure is caught and reported with exit status 1.
    """
    started = time.perf_counter()
    out_dir = prepare_output_dir(config.resolve_output_dir(out))
    problem = config.build_problem()
    mesh = config.build_mesh()
    writer = StateWriter(out_dir, problem, config.dump_stride,
                         step_count(problem.T, config.resolve_dt(mesh)))
    logger.info(f"Run {config.run_name} -> {out_dir} (config {config.config_hash()[:12]})")

    try:
        traj = simulate(config, callback=writer)
    except StepFailure as exc:
        partial = exc.trajectory
        invariants = hard_invariants(partial) if partial is not None and partial.n_levels else {}
        files = list(writer.files)
        manifest = _manifest(config, partial, 'step_failure', invariants, files, started,
                             failure={'message': str(exc), 'dump': exc.dump})
        files.append(write_json(out_dir / 'manifest.json', manifest))
        logger.error(f"Run {config.run_name} failed: {exc}")
        return RunResult(out_dir, EXIT_FAILURE, 'step_failure', partial,
                         invariants=invariants, files=files, error=str(exc))

    invariants = hard_invariants(traj)
    files = list(writer.files)

    report = None
    if config.diagnostics.enabled:
        report = compute_diagnostics(traj, config.diagnostics.build())
        payload = report.to_dict()
        payload['invariants'] = invariants
        files.append(write_json(out_dir / 'diagnostics.json', payload))

    status = 'ok' if invariants['pass'] else 'invariant_violation'
    if not invariants['pass']:
        logger.error(f"Hard invariant violated: {invariants}")
    files.append(out_dir / 'manifest.json')
    write_json(out_dir / 'manifest.json', _manifest(config, traj, status, invariants, files, started))

    exit_code = EXIT_OK if invariants['pass'] else EXIT_FAILURE
    logger.info(f"Run {config.run_name} finished with status {status}")
    return RunResult(out_dir, exit_code, status, traj, report, invariants, files)
