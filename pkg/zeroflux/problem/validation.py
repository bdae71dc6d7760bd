"""Sampled validation of the structural hypotheses on (f, phi, u0)."""

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from zeroflux.problem.model import Problem
from zeroflux.utils.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

ENDPOINT_TOL = 1e-14
RELATIVE_SLACK = 1e-9


@dataclass
class AxiomCheck:
    """One pass/fail line of a validation or axiom report."""
    name: str
    passed: bool
    worst: float = 0.0  # worst violation found (0 when none)
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class ValidationReport:
    problem: str
    checks: List[AxiomCheck] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def check(self, name: str) -> AxiomCheck:
        for entry in self.checks:
            if entry.name == name:
                return entry
        raise KeyError(name)

    def failures(self) -> List[str]:
        return [check.name for check in self.checks if not check.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'problem': self.problem,
            'pass': self.passed,
            'checks': [check.to_dict() for check in self.checks],
            'notes': list(self.notes),
        }


def validate(problem: Problem, samples: int = 256, mesh: Optional[Any] = None) -> ValidationReport:
    """
    Check (H1), the structure of phi and the declared constants on a grid.

    Failures are reported, never raised. When a mesh is given the initial
    cell averages are checked against [0, u_max] as well.
    """
    if samples < 2:
        raise InvalidArgumentError(f"samples must be >= 2, got {samples}")

    u_max, u_c = problem.u_max, problem.u_c
    grid = np.linspace(0.0, u_max, samples)
    report = ValidationReport(problem=problem.name)

    # (H1): f(0) = f(u_max) = 0 componentwise
    endpoints = np.abs(problem.flux.evaluate(np.array([0.0, u_max])))
    worst = float(endpoints.max())
    report.checks.append(AxiomCheck(
        'flux_vanishes_at_endpoints', worst <= ENDPOINT_TOL, worst,
        f"|f(0)|={endpoints[0].max():.3e}, |f(u_max)|={endpoints[1].max():.3e}",
    ))

    phi = problem.phi(grid)
    phi0 = float(problem.phi(np.array([0.0]))[0])
    report.checks.append(AxiomCheck('phi_normalized', abs(phi0) <= ENDPOINT_TOL, abs(phi0)))

    below = grid <= u_c
    flat = float(np.max(np.abs(phi[below] - phi0))) if np.any(below) else 0.0
    report.checks.append(AxiomCheck(
        'phi_constant_below_threshold', flat <= ENDPOINT_TOL, flat,
        f"on [0, {u_c}]",
    ))

    steps = np.diff(phi)
    decrease = float(max(0.0, -steps.min())) if steps.size else 0.0
    above = grid[:-1] >= u_c
    strict_ok = True
    if u_c < u_max and np.any(above):
        strict_ok = bool(np.all(steps[above] > 0.0))
    report.checks.append(AxiomCheck(
        'phi_monotone', decrease == 0.0 and strict_ok, decrease,
        "nondecreasing on [0, u_max], strictly increasing on [u_c, u_max]",
    ))

    phi_slopes = np.abs(steps) / np.diff(grid)
    phi_excess = float(max(0.0, phi_slopes.max() - problem.phi_lipschitz * (1 + RELATIVE_SLACK)))
    report.checks.append(AxiomCheck(
        'phi_lipschitz', phi_excess == 0.0, phi_excess,
        f"declared {problem.phi_lipschitz}, sampled {phi_slopes.max():.6g}",
    ))

    values = problem.flux.evaluate(grid)
    flux_slopes = np.linalg.norm(np.diff(values, axis=0), axis=-1) / np.diff(grid)
    bound = problem.flux_lipschitz * (1 + RELATIVE_SLACK)
    flux_excess = float(max(0.0, flux_slopes.max() - bound))
    report.checks.append(AxiomCheck(
        'flux_lipschitz', flux_excess == 0.0, flux_excess,
        f"declared M={problem.flux_lipschitz}, sampled {flux_slopes.max():.6g}",
    ))

    sup = float(np.max(np.linalg.norm(values, axis=-1)))
    sup_excess = float(max(0.0, sup - problem.flux_sup * (1 + RELATIVE_SLACK)))
    report.checks.append(AxiomCheck(
        'flux_sup_norm', sup_excess == 0.0, sup_excess,
        f"declared {problem.flux_sup}, sampled {sup:.6g}",
    ))

    if mesh is not None:
        averages = problem.initial.cell_averages(mesh)
        escape = float(max(0.0, -averages.min(), averages.max() - u_max))
        report.checks.append(AxiomCheck(
            'initial_datum_range', escape <= 1e-12, escape,
            f"cell averages in [{averages.min():.6g}, {averages.max():.6g}]",
        ))

    if problem.nondegenerate is not None:
        report.notes.append(f"non-degeneracy of (f, phi) recorded as {problem.nondegenerate}")

    logger.debug(f"Validated problem {problem.name}: failures={report.failures()}")
    return report
