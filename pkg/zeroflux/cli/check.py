"""Static checks of a configuration: problem structure, flux axioms, mesh admissibility."""

from typing import Any, Dict

from zeroflux.config.run_config import RunConfig
from zeroflux.numflux.axioms import check_flux_axioms
from zeroflux.mesh.mesh import check_admissibility
from zeroflux.problem.validation import validate
from zeroflux.utils.logger import get_logger

logger = get_logger(__name__)


def check(config: RunConfig, samples: int = 64) -> Dict[str, Any]:
    """Aggregate validate(), check_flux_axioms() and check_admissibility() into one JSON-ready dict."""
    problem = config.build_problem()
    mesh = config.build_mesh()
    scheme = config.build_scheme(problem)

    problem_report = validate(problem, mesh=mesh)
    flux_report = check_flux_axioms(scheme, samples=samples)
    mesh_report = check_admissibility(mesh)

    passed = problem_report.passed and flux_report.passed and mesh_report.passed
    for name, report in (('problem', problem_report), ('flux', flux_report), ('mesh', mesh_report)):
        if not report.passed:
            logger.warning(f"Check '{name}' failed: {report.to_dict()}")
    logger.info(f"Checks for {config.run_name} ({scheme.name}): {'pass' if passed else 'FAIL'}")

    return {
        'config_hash': config.config_hash(),
        'pass': passed,
        'problem': problem_report.to_dict(),
        'flux': flux_report.to_dict(),
        'mesh': mesh_report.to_dict(),
    }
