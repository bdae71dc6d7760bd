"""
Sampled verification of the numerical-flux axioms.

On a samples x samples grid over [0, u_max]^2, for every reference normal
(+-e_i) and two face measures, measure the worst violation of:
monotonicity, conservativity, consistency, the m(sigma) M Lipschitz bound,
the (||f|| + M u_max) m(sigma) sup bound, and the per-cell identity
sum_sigma F_{K,sigma}(s, s) = 0.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

from zeroflux.mesh.mesh import build_interval_mesh, build_rect_mesh
from zeroflux.numflux.schemes import FluxScheme
from zeroflux.problem.validation import AxiomCheck
from zeroflux.utils.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

AXIOM_TOL = 1e-9
CONSISTENCY_TOL = 1e-12
REFERENCE_MEASURES = (1.0, 0.5)


@dataclass
class FluxAxiomReport:
    scheme: str
    samples: int
    checks: List[AxiomCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def check(self, name: str) -> AxiomCheck:
        for entry in self.checks:
            if entry.name == name:
                return entry
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'scheme': self.scheme,
            'samples': self.samples,
            'pass': self.passed,
            'checks': [check.to_dict() for check in self.checks],
        }


def _reference_normals(dimension: int) -> List[np.ndarray]:
    normals = []
    for axis in range(dimension):
        e = np.zeros(dimension)
        e[axis] = 1.0
        normals.extend([e, -e])
    return normals


def check_flux_axioms(scheme: FluxScheme, samples: int = 64) -> FluxAxiomReport:
    if samples < 8:
        raise InvalidArgumentError(f"samples must be >= 8, got {samples}")

    problem = scheme.problem
    u_max = problem.u_max
    M = problem.flux_lipschitz
    grid = np.linspace(0.0, u_max, samples)
    spacing = np.diff(grid)
    A, B = np.meshgrid(grid, grid, indexing='ij')
    a, b = A.ravel(), B.ravel()

    worst = {'monotone': 0.0, 'conservative': 0.0, 'consistent': 0.0,
             'lipschitz': 0.0, 'bounded': 0.0}

    for normal in _reference_normals(problem.dimension):
        for m in REFERENCE_MEASURES:
            measures = np.full(a.size, m)
            normals = np.tile(normal, (a.size, 1))
            F = scheme.fluxes(a, b, measures, normals).reshape(samples, samples)

            # nondecreasing in a (axis 0), nonincreasing in b (axis 1)
            worst['monotone'] = max(
                worst['monotone'],
                float(np.max(-np.diff(F, axis=0), initial=0.0)),
                float(np.max(np.diff(F, axis=1), initial=0.0)),
            )

            # F_{K,L}(a, b) = -F_{L,K}(b, a): the neighbour sees -n and swapped states
            G = scheme.fluxes(b, a, measures, -normals).reshape(samples, samples)
            worst['conservative'] = max(worst['conservative'], float(np.max(np.abs(F + G))))

            diagonal = np.diag(F)
            exact = m * problem.flux.normal_value(grid, normal)
            worst['consistent'] = max(worst['consistent'], float(np.max(np.abs(diagonal - exact))))

            bound = m * M * (1 + AXIOM_TOL)
            slope_a = np.abs(np.diff(F, axis=0)) / spacing[:, None]
            slope_b = np.abs(np.diff(F, axis=1)) / spacing[None, :]
            worst['lipschitz'] = max(
                worst['lipschitz'],
                float(np.max(slope_a - bound, initial=0.0)),
                float(np.max(slope_b - bound, initial=0.0)),
            )

            cap = (problem.flux_sup + M * u_max) * m * (1 + AXIOM_TOL)
            worst['bounded'] = max(worst['bounded'], float(np.max(np.abs(F) - cap, initial=0.0)))

    # sum over the faces of one closed cell of F(s, s) vanishes
    if problem.dimension == 1:
        cell = build_interval_mesh(0.0, 1.0, 1)
    else:
        cell = build_rect_mesh(1.0, 0.5, 1, 1)
    identity = 0.0
    for s in grid:
        states = np.full(cell.n_faces, s)
        total = scheme.fluxes(states, states, cell.face_measures, cell.face_normals).sum()
        identity = max(identity, abs(float(total)))

    report = FluxAxiomReport(scheme=scheme.name, samples=samples)
    report.checks.append(AxiomCheck('monotone', worst['monotone'] <= AXIOM_TOL, worst['monotone']))
    report.checks.append(AxiomCheck('conservative', worst['conservative'] <= AXIOM_TOL, worst['conservative']))
    report.checks.append(AxiomCheck('consistent', worst['consistent'] <= CONSISTENCY_TOL, worst['consistent']))
    report.checks.append(AxiomCheck(
        'lipschitz', worst['lipschitz'] <= AXIOM_TOL, worst['lipschitz'], f"M={M}",
    ))
    report.checks.append(AxiomCheck('bounded', worst['bounded'] <= AXIOM_TOL, worst['bounded']))
    report.checks.append(AxiomCheck('cell_flux_identity', identity <= CONSISTENCY_TOL, identity))

    logger.debug(f"Flux axioms for {scheme.name}: {[c.name for c in report.checks if not c.passed]} failed")
    return report
