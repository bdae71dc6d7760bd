"""
Monotone two-point convection fluxes F_{K,sigma}(a, b) and their entropy fluxes.

Both schemes are written per unit face measure and scaled by m(sigma):
with g(s) = f(s) . n,

    godunov:  min_{[a,b]} g  if a <= b,  max_{[b,a]} g  otherwise
    rusanov:  (g(a) + g(b)) / 2 + lambda(n) (a - b) / 2

Every evaluation is vectorized over faces. Faces are grouped by normal so
the projected flux (and its stationary points) is built once per direction.

Usage:
    scheme = GodunovFlux(preset('burgers_degenerate'))
    scheme.face_flux(FaceGeometry(1.0, (1.0,)), 0.8, 0.2)   # 0.25
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterator, Optional, Sequence, Tuple

import numpy as np

from zeroflux.problem.model import Problem
from zeroflux.utils.errors import FluxDomainError, InvalidArgumentError

logger = logging.getLogger(__name__)

DOMAIN_SLACK = 1e-12
GRID_POINTS = 4096
REFINE_POINTS = 65
SPEED_SAMPLES = 4096
SPEED_MARGIN = 1.01


class EntropyKind(str, Enum):
    """Which entropy pair: (s-k)^+ (sub), (k-s)^+ (super) or |s-k| (full)."""
    SUB = 'sub'
    SUPER = 'super'
    FULL = 'full'

    @classmethod
    def _missing_(cls, value):
        aliases = {'plus': cls.SUB, 'minus': cls.SUPER}
        return aliases.get(str(value).lower())


@dataclass(frozen=True)
class FaceGeometry:
    """m(sigma) and the unit normal n_{K,sigma} of one face."""
    measure: float
    normal: Tuple[float, ...]

    def arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.array([float(self.measure)]), np.array([self.normal], dtype=float)


def _normal_groups(normals: np.ndarray) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """Yield (normal, face indices) for each distinct normal."""
    if normals.shape[0] == 0:
        return
    unique, inverse = np.unique(normals, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    for group, normal in enumerate(unique):
        yield normal, np.flatnonzero(inverse == group)


class FluxScheme:
    """Base class: domain checks, grouping, entropy fluxes, scalar wrappers."""

    name = 'abstract'

    def __init__(self, problem: Problem, slack: float = DOMAIN_SLACK):
        self.problem = problem
        self.slack = slack

    # Subclasses implement the per-unit-measure flux for one normal

    def _unit_flux(self, a: np.ndarray, b: np.ndarray, normal: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _unit_partials(self, a: np.ndarray, b: np.ndarray,
                       normal: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    # ───────────────────────────────────────────────────────────────

    def check_domain(self, *arrays: np.ndarray) -> None:
        lower, upper = -self.slack, self.problem.u_max + self.slack
        for values in arrays:
            values = np.asarray(values, dtype=float)
            if values.size == 0:
                continue
            if not np.all(np.isfinite(values)):
                bad = values[~np.isfinite(values)].flat[0]
                raise FluxDomainError(float(bad), 0.0, self.problem.u_max)
            low, high = values.min(), values.max()
            if low < lower:
                raise FluxDomainError(float(low), 0.0, self.problem.u_max)
            if high > upper:
                raise FluxDomainError(float(high), 0.0, self.problem.u_max)

    def fluxes(self, a: np.ndarray, b: np.ndarray, measures: np.ndarray,
               normals: np.ndarray, check: bool = True) -> np.ndarray:
        """F_{K,sigma}(a_i, b_i) for faces with measures m_i and normals n_i."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if check:
            self.check_domain(a, b)
        out = np.zeros(a.shape[0])
        for normal, idx in _normal_groups(np.asarray(normals, dtype=float)):
            out[idx] = self._unit_flux(a[idx], b[idx], normal)
        return np.asarray(measures, dtype=float) * out

    def directional_fluxes(self, a: np.ndarray, b: np.ndarray, normal: Sequence[float],
                           measure: float = 1.0, check: bool = True) -> np.ndarray:
        """F(a, b) for arrays of any shape sharing one normal and one face measure."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if check:
            self.check_domain(a, b)
        flat = self._unit_flux(a.ravel(), b.ravel(), np.asarray(normal, dtype=float))
        return measure * flat.reshape(a.shape)

    def partials(self, a: np.ndarray, b: np.ndarray, measures: np.ndarray,
                 normals: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """(dF/da, dF/db) per face; dF/da >= 0 >= dF/db."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        da = np.zeros(a.shape[0])
        db = np.zeros(a.shape[0])
        for normal, idx in _normal_groups(np.asarray(normals, dtype=float)):
            da[idx], db[idx] = self._unit_partials(a[idx], b[idx], normal)
        m = np.asarray(measures, dtype=float)
        return m * da, m * db

    def entropy_fluxes(self, a: np.ndarray, b: np.ndarray, k: float, measures: np.ndarray,
                       normals: np.ndarray, kind='full') -> np.ndarray:
        kind = EntropyKind(kind)
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        self.check_domain(a, b, np.array([k]))
        kk = np.full(a.shape[0], float(k))
        if kind is EntropyKind.SUB:
            return (self.fluxes(np.maximum(a, k), np.maximum(b, k), measures, normals)
                    - self.fluxes(kk, kk, measures, normals))
        if kind is EntropyKind.SUPER:
            return (self.fluxes(kk, kk, measures, normals)
                    - self.fluxes(np.minimum(a, k), np.minimum(b, k), measures, normals))
        return (self.fluxes(np.maximum(a, k), np.maximum(b, k), measures, normals)
                - self.fluxes(np.minimum(a, k), np.minimum(b, k), measures, normals))

    def face_flux(self, geometry: FaceGeometry, a: float, b: float) -> float:
        measures, normals = geometry.arrays()
        return float(self.fluxes(np.array([a]), np.array([b]), measures, normals)[0])

    def entropy_face_flux(self, geometry: FaceGeometry, a: float, b: float, k: float,
                          kind='full') -> float:
        measures, normals = geometry.arrays()
        return float(self.entropy_fluxes(np.array([a]), np.array([b]), k, measures, normals, kind)[0])

    def describe(self) -> Dict[str, object]:
        return {'name': self.name}


class GodunovFlux(FluxScheme):
    """Exact Riemann-problem flux of the projected scalar law."""

    name = 'godunov'

    def __init__(self, problem: Problem, slack: float = DOMAIN_SLACK,
                 fd_step: float = 1e-7):
        super().__init__(problem, slack)
        self.fd_step = fd_step * problem.u_max
        self._stationary: Dict[Tuple[float, ...], Optional[np.ndarray]] = {}

    def _stationary_points(self, normal: np.ndarray) -> Optional[np.ndarray]:
        key = tuple(float(x) for x in normal)
        if key not in self._stationary:
            margin = 1.0 + self.problem.u_max
            self._stationary[key] = self.problem.flux.stationary_points(
                normal, -margin, margin
            )
        return self._stationary[key]

    def _unit_flux(self, a, b, normal):
        flux = self.problem.flux
        ga = flux.normal_value(a, normal)
        gb = flux.normal_value(b, normal)
        ascending = a <= b
        lo = np.minimum(a, b)
        hi = np.maximum(a, b)
        roots = self._stationary_points(normal)

        if roots is None:
            return self._grid_extremum(a, b, normal, ga, gb)

        low_candidate = np.minimum(ga, gb)
        high_candidate = np.maximum(ga, gb)
        for root in roots:
            inside = (lo <= root) & (root <= hi)
            if not np.any(inside):
                continue
            value = float(flux.normal_value(np.array([root]), normal)[0])
            low_candidate = np.where(inside, np.minimum(low_candidate, value), low_candidate)
            high_candidate = np.where(inside, np.maximum(high_candidate, value), high_candidate)
        return np.where(ascending, low_candidate, high_candidate)

    def _grid_extremum(self, a, b, normal, ga, gb):
        """Brute-force extremum on a uniform grid, refined once around the best node."""
        flux = self.problem.flux
        sign = np.where(a <= b, 1.0, -1.0)  # minimise sign * g
        lo = np.minimum(a, b)[:, None]
        hi = np.maximum(a, b)[:, None]
        t = np.linspace(0.0, 1.0, GRID_POINTS)[None, :]
        nodes = lo + (hi - lo) * t
        values = sign[:, None] * flux.normal_value(nodes, normal)
        best = np.argmin(values, axis=1)
        rows = np.arange(a.shape[0])
        spacing = (hi - lo)[:, 0] / (GRID_POINTS - 1)
        centre = nodes[rows, best]
        left = np.maximum(centre - spacing, lo[:, 0])[:, None]
        right = np.minimum(centre + spacing, hi[:, 0])[:, None]
        fine = left + (right - left) * np.linspace(0.0, 1.0, REFINE_POINTS)[None, :]
        fine_values = sign[:, None] * flux.normal_value(fine, normal)
        extremum = np.minimum(values.min(axis=1), fine_values.min(axis=1))
        endpoints = np.minimum(sign * ga, sign * gb)
        return sign * np.minimum(extremum, endpoints)

    def _unit_partials(self, a, b, normal):
        step = self.fd_step
        upper = self.problem.u_max
        # one-sided quotients, stepping inward at the top of the range
        sa = np.where(a + step > upper, -step, step)
        sb = np.where(b + step > upper, -step, step)
        base = self._unit_flux(a, b, normal)
        da = (self._unit_flux(a + sa, b, normal) - base) / sa
        db = (self._unit_flux(a, b + sb, normal) - base) / sb
        return np.maximum(da, 0.0), np.minimum(db, 0.0)


class RusanovFlux(FluxScheme):
    """Central flux with local Lax-Friedrichs dissipation lambda(n)(a - b)/2."""

    name = 'rusanov'

    def __init__(self, problem: Problem, speed_bound: Optional[float] = None,
                 slack: float = DOMAIN_SLACK):
        super().__init__(problem, slack)
        if speed_bound is not None and speed_bound < 0:
            raise InvalidArgumentError(f"speed bound must be >= 0, got {speed_bound}")
        self.speed_bound = speed_bound
        self._speeds: Dict[Tuple[float, ...], float] = {}

    def speed(self, normal: Sequence[float]) -> float:
        """lambda(n): the override, or 1.01 x sampled sup |f' . n| on [0, u_max]."""
        if self.speed_bound is not None:
            return float(self.speed_bound)
        key = tuple(float(x) for x in normal)
        if key not in self._speeds:
            grid = np.linspace(0.0, self.problem.u_max, SPEED_SAMPLES)
            slopes = self.problem.flux.normal_slope(grid, np.asarray(key))
            self._speeds[key] = SPEED_MARGIN * float(np.max(np.abs(slopes)))
        return self._speeds[key]

    def _unit_flux(self, a, b, normal):
        flux = self.problem.flux
        lam = self.speed(normal)
        return 0.5 * (flux.normal_value(a, normal) + flux.normal_value(b, normal)) + 0.5 * lam * (a - b)

    def _unit_partials(self, a, b, normal):
        flux = self.problem.flux
        lam = self.speed(normal)
        return (0.5 * (flux.normal_slope(a, normal) + lam),
                0.5 * (flux.normal_slope(b, normal) - lam))

    def describe(self) -> Dict[str, object]:
        return {'name': self.name, 'speed_bound': self.speed_bound}


SCHEMES = {
    GodunovFlux.name: GodunovFlux,
    RusanovFlux.name: RusanovFlux,
}


def make_scheme(name: str, problem: Problem, speed_bound: Optional[float] = None,
                fd_step: float = 1e-7) -> FluxScheme:
    """Scheme by name; `speed_bound` only applies to rusanov, `fd_step` to godunov."""
    if name not in SCHEMES:
        raise InvalidArgumentError(
            f"unknown scheme '{name}'; expected one of {', '.join(sorted(SCHEMES))}"
        )
    if name == RusanovFlux.name:
        return RusanovFlux(problem, speed_bound=speed_bound)
    return GodunovFlux(problem, fd_step=fd_step)
