"""
Continuous model data: flux f, diffusion phi, thresholds, initial datum, horizon.

Fluxes and diffusions are evaluation contracts plus declared constants.
Serializable families (PolynomialFlux, PowerDiffusion and the initial
datum kinds) cover the run-config schema; the Callable* variants are for
programmatic use and cannot be written to a config file.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from zeroflux.mesh.mesh import cell_quadrature
from zeroflux.utils.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

SAMPLED_DERIVATIVE_STEP = 1e-6


def _real_roots_in(poly: Polynomial, lo: float, hi: float) -> np.ndarray:
    if poly.degree() < 1 or not np.any(poly.coef):
        return np.empty(0)
    roots = poly.roots()
    real = roots[np.abs(roots.imag) <= 1e-12 * (1.0 + np.abs(roots.real))].real
    return np.sort(real[(real >= lo) & (real <= hi)])


def _poly_sup(poly: Polynomial, lo: float, hi: float) -> float:
    """Exact max of a polynomial over [lo, hi]."""
    candidates = np.concatenate([[lo, hi], _real_roots_in(poly.deriv(), lo, hi)])
    return float(np.max(poly(candidates)))


# ═══════════════════════════════════════════════════════════════════
# Fluxes
# ═══════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class PolynomialFlux:
    """f_i(u) = sum_j coefficients[i][j] u^j for each component i."""
    coefficients: Tuple[Tuple[float, ...], ...]

    def __post_init__(self):
        coeffs = tuple(tuple(float(c) for c in comp) for comp in self.coefficients)
        if not coeffs or any(len(c) == 0 for c in coeffs):
            raise InvalidArgumentError("flux needs at least one coefficient per component")
        if len(coeffs) not in (1, 2):
            raise InvalidArgumentError("flux must have 1 or 2 components")
        object.__setattr__(self, 'coefficients', coeffs)

    @property
    def dimension(self) -> int:
        return len(self.coefficients)

    @cached_property
    def _components(self) -> List[Polynomial]:
        return [Polynomial(c) for c in self.coefficients]

    @property
    def is_zero(self) -> bool:
        return all(not any(c) for c in self.coefficients)

    def evaluate(self, u: np.ndarray) -> np.ndarray:
        """f(u) with a trailing component axis."""
        u = np.asarray(u, dtype=float)
        return np.stack([p(u) for p in self._components], axis=-1)

    def derivative(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        return np.stack([p.deriv()(u) for p in self._components], axis=-1)

    def projected(self, normal: Sequence[float]) -> Polynomial:
        """The scalar polynomial s -> f(s) . n."""
        total = Polynomial([0.0])
        for weight, poly in zip(normal, self._components):
            total = total + float(weight) * poly
        return total

    def normal_value(self, u: np.ndarray, normal: Sequence[float]) -> np.ndarray:
        return self.projected(normal)(np.asarray(u, dtype=float))

    def normal_slope(self, u: np.ndarray, normal: Sequence[float]) -> np.ndarray:
        return self.projected(normal).deriv()(np.asarray(u, dtype=float))

    def stationary_points(self, normal: Sequence[float], lo: float,
                          hi: float) -> Optional[np.ndarray]:
        """Real zeros of (f . n)' inside [lo, hi]."""
        return _real_roots_in(self.projected(normal).deriv(), lo, hi)

    def sup_norm(self, lo: float, hi: float) -> float:
        """sup |f| (Euclidean) over [lo, hi], exact."""
        square = sum((p * p for p in self._components), Polynomial([0.0]))
        return float(np.sqrt(max(_poly_sup(square, lo, hi), 0.0)))

    def slope_bound(self, lo: float, hi: float) -> float:
        """sup |f'| (Euclidean) over [lo, hi], exact."""
        square = sum((p.deriv() * p.deriv() for p in self._components), Polynomial([0.0]))
        return float(np.sqrt(max(_poly_sup(square, lo, hi), 0.0)))

    def to_dict(self) -> Dict[str, Any]:
        return {'flux_poly': [list(c) for c in self.coefficients]}


@dataclass(frozen=True)
class CallableFlux:
    """
    Flux given by a Python callable returning shape u.shape + (dimension,).

    Derivatives fall back to central differences and no stationary points
    are known, so Godunov uses its grid search.
    """
    func: Callable[[np.ndarray], np.ndarray]
    dimension: int = 1
    derivative_func: Optional[Callable[[np.ndarray], np.ndarray]] = None

    @property
    def is_zero(self) -> bool:
        return False

    def evaluate(self, u: np.ndarray) -> np.ndarray:
        values = np.asarray(self.func(np.asarray(u, dtype=float)), dtype=float)
        if self.dimension == 1 and values.shape == np.shape(u):
            values = values[..., None]
        return values

    def derivative(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if self.derivative_func is not None:
            values = np.asarray(self.derivative_func(u), dtype=float)
            return values[..., None] if values.shape == u.shape else values
        step = SAMPLED_DERIVATIVE_STEP
        return (self.evaluate(u + step) - self.evaluate(u - step)) / (2 * step)

    def normal_value(self, u: np.ndarray, normal: Sequence[float]) -> np.ndarray:
        return self.evaluate(u) @ np.asarray(normal, dtype=float)

    def normal_slope(self, u: np.ndarray, normal: Sequence[float]) -> np.ndarray:
        return self.derivative(u) @ np.asarray(normal, dtype=float)

    def stationary_points(self, normal, lo, hi) -> Optional[np.ndarray]:
        return None

    def sup_norm(self, lo: float, hi: float, samples: int = 4097) -> float:
        grid = np.linspace(lo, hi, samples)
        return float(np.max(np.linalg.norm(self.evaluate(grid), axis=-1)))

    def slope_bound(self, lo: float, hi: float, samples: int = 4097) -> float:
        grid = np.linspace(lo, hi, samples)
        return float(np.max(np.linalg.norm(self.derivative(grid), axis=-1)))


# ═══════════════════════════════════════════════════════════════════
# Diffusions
# ═══════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class PowerDiffusion:
    """phi(u) = c * ((u - u_c)^+)^p with p >= 1."""
    c: float = 1.0
    p: float = 1.0
    u_c: float = 0.0

    def __post_init__(self):
        if not self.p >= 1.0:
            raise InvalidArgumentError(f"diffusion exponent must be >= 1, got {self.p}")

    def evaluate(self, u: np.ndarray) -> np.ndarray:
        excess = np.maximum(np.asarray(u, dtype=float) - self.u_c, 0.0)
        return self.c * excess ** self.p

    def right_derivative(self, u: np.ndarray) -> np.ndarray:
        """One-sided right derivative (the slope at u_c is taken from above)."""
        u = np.asarray(u, dtype=float)
        excess = u - self.u_c
        if self.p == 1.0:
            return np.where(excess >= 0.0, self.c, 0.0)
        return np.where(excess > 0.0, self.c * self.p * np.maximum(excess, 0.0) ** (self.p - 1.0), 0.0)

    def lipschitz(self, u_max: float) -> float:
        span = max(u_max - self.u_c, 0.0)
        if self.c == 0.0 or span == 0.0:
            return 0.0
        return abs(self.c) * self.p * span ** (self.p - 1.0)

    def to_dict(self) -> Dict[str, Any]:
        return {'c': self.c, 'p': self.p, 'u_c': self.u_c}


@dataclass(frozen=True)
class CallableDiffusion:
    """phi given by a callable; the derivative defaults to a right difference quotient."""
    func: Callable[[np.ndarray], np.ndarray]
    derivative_func: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def evaluate(self, u: np.ndarray) -> np.ndarray:
        return np.asarray(self.func(np.asarray(u, dtype=float)), dtype=float)

    def right_derivative(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if self.derivative_func is not None:
            return np.asarray(self.derivative_func(u), dtype=float)
        step = SAMPLED_DERIVATIVE_STEP
        return (self.evaluate(u + step) - self.evaluate(u)) / step

    def lipschitz(self, u_max: float, samples: int = 4097) -> float:
        grid = np.linspace(0.0, u_max, samples)
        return float(np.max(np.abs(np.diff(self.evaluate(grid)) / np.diff(grid))))


# ═══════════════════════════════════════════════════════════════════
# Initial data
# ═══════════════════════════════════════════════════════════════════

def _box_fraction_below(lower: np.ndarray, upper: np.ndarray, cut: float) -> np.ndarray:
    """Fraction of each [lower, upper] lying below `cut`."""
    return np.clip((cut - lower) / (upper - lower), 0.0, 1.0)


@dataclass(frozen=True)
class ConstantDatum:
    value: float
    kind: str = field(default='constant', init=False)

    def evaluate(self, points: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
        return np.full(np.atleast_2d(points).shape[0], float(self.value))

    def cell_averages(self, mesh) -> np.ndarray:
        return np.full(mesh.n_cells, float(self.value))


@dataclass(frozen=True)
class StepDatum:
    """`left` below `position` along `axis`, `right` above."""
    left: float
    right: float
    position: float
    axis: int = 0
    kind: str = field(default='step', init=False)

    def evaluate(self, points, lower, upper) -> np.ndarray:
        x = np.atleast_2d(points)[:, self.axis]
        return np.where(x < self.position, self.left, self.right).astype(float)

    def cell_averages(self, mesh) -> np.ndarray:
        frac = _box_fraction_below(
            mesh.cell_lower[:, self.axis], mesh.cell_upper[:, self.axis], self.position
        )
        return self.left * frac + self.right * (1.0 - frac)


@dataclass(frozen=True)
class CosineDatum:
    """mean + amplitude cos(k pi (x - a) / (b - a)) along `axis`."""
    mean: float
    amplitude: float
    wavenumber: int = 1
    axis: int = 0
    kind: str = field(default='cosine', init=False)

    def _rate(self, lower, upper) -> Tuple[float, float]:
        a, b = float(lower[self.axis]), float(upper[self.axis])
        return a, self.wavenumber * np.pi / (b - a)

    def evaluate(self, points, lower, upper) -> np.ndarray:
        a, kappa = self._rate(lower, upper)
        x = np.atleast_2d(points)[:, self.axis]
        return self.mean + self.amplitude * np.cos(kappa * (x - a))

    def cell_averages(self, mesh) -> np.ndarray:
        a, kappa = self._rate(mesh.domain_lower, mesh.domain_upper)
        lo = mesh.cell_lower[:, self.axis]
        hi = mesh.cell_upper[:, self.axis]
        if kappa == 0.0:
            return np.full(mesh.n_cells, self.mean + self.amplitude)
        integral = (np.sin(kappa * (hi - a)) - np.sin(kappa * (lo - a))) / kappa
        return self.mean + self.amplitude * integral / (hi - lo)


@dataclass(frozen=True)
class LinearDatum:
    """offset + slope * x along `axis`."""
    offset: float
    slope: float
    axis: int = 0
    kind: str = field(default='linear', init=False)

    def evaluate(self, points, lower, upper) -> np.ndarray:
        return self.offset + self.slope * np.atleast_2d(points)[:, self.axis]

    def cell_averages(self, mesh) -> np.ndarray:
        return self.offset + self.slope * mesh.cell_centers[:, self.axis]


@dataclass(frozen=True)
class TableDatum:
    """Piecewise constant along `axis`: values[i] on [breakpoints[i-1], breakpoints[i])."""
    breakpoints: Tuple[float, ...]
    values: Tuple[float, ...]
    axis: int = 0
    kind: str = field(default='table', init=False)

    def __post_init__(self):
        breaks = tuple(float(b) for b in self.breakpoints)
        values = tuple(float(v) for v in self.values)
        if len(values) != len(breaks) + 1:
            raise InvalidArgumentError("table needs one more value than breakpoints")
        if any(b1 >= b2 for b1, b2 in zip(breaks, breaks[1:])):
            raise InvalidArgumentError("table breakpoints must be strictly increasing")
        object.__setattr__(self, 'breakpoints', breaks)
        object.__setattr__(self, 'values', values)

    def evaluate(self, points, lower, upper) -> np.ndarray:
        x = np.atleast_2d(points)[:, self.axis]
        index = np.searchsorted(np.asarray(self.breakpoints), x, side='right')
        return np.asarray(self.values)[index]

    def cell_averages(self, mesh) -> np.ndarray:
        lo = mesh.cell_lower[:, self.axis]
        hi = mesh.cell_upper[:, self.axis]
        cuts = [-np.inf, *self.breakpoints, np.inf]
        total = np.zeros(mesh.n_cells)
        for value, start, stop in zip(self.values, cuts[:-1], cuts[1:]):
            overlap = np.clip(np.minimum(hi, stop) - np.maximum(lo, start), 0.0, None)
            total += value * overlap
        return total / (hi - lo)


@dataclass(frozen=True)
class CallableDatum:
    """u0 given by a callable on points of shape (n, dim); averaged by Gauss quadrature."""
    func: Callable[[np.ndarray], np.ndarray]
    order: int = 6
    kind: str = field(default='callable', init=False)

    def evaluate(self, points, lower, upper) -> np.ndarray:
        return np.asarray(self.func(np.atleast_2d(points)), dtype=float)

    def cell_averages(self, mesh) -> np.ndarray:
        points, weights = cell_quadrature(mesh, self.order)
        values = self.evaluate(points.reshape(-1, mesh.dimension), mesh.domain_lower, mesh.domain_upper)
        return np.sum(values.reshape(mesh.n_cells, -1) * weights, axis=1) / mesh.cell_measures


# ═══════════════════════════════════════════════════════════════════
# Problem
# ═══════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class Problem:
    """
    Problem (P): u_t + div f(u) - lap phi(u) = 0 with zero-flux boundaries.

    flux_lipschitz (M) and flux_sup (||f||_inf) are declared constants;
    validate() checks them against samples.
    """
    flux: Any
    diffusion: Any
    initial: Any
    u_max: float = 1.0
    u_c: float = 0.0
    T: float = 0.5
    flux_lipschitz: Optional[float] = None
    flux_sup: Optional[float] = None
    phi_lipschitz: Optional[float] = None
    name: str = "custom"
    nondegenerate: Optional[bool] = None  # recorded for presets only

    def __post_init__(self):
        if not self.u_max > 0:
            raise InvalidArgumentError(f"u_max must be positive, got {self.u_max}")
        if not 0.0 <= self.u_c <= self.u_max:
            raise InvalidArgumentError(f"u_c must lie in [0, u_max], got {self.u_c}")
        if not self.T > 0:
            raise InvalidArgumentError(f"horizon T must be positive, got {self.T}")
        if self.flux_lipschitz is None:
            object.__setattr__(
                self, 'flux_lipschitz', 1.01 * self.flux.slope_bound(0.0, self.u_max)
            )
        if self.flux_sup is None:
            object.__setattr__(self, 'flux_sup', self.flux.sup_norm(0.0, self.u_max))
        if self.phi_lipschitz is None:
            object.__setattr__(self, 'phi_lipschitz', self.diffusion.lipschitz(self.u_max))

    @property
    def dimension(self) -> int:
        return self.flux.dimension

    def phi(self, u: np.ndarray) -> np.ndarray:
        return self.diffusion.evaluate(u)

    def phi_prime(self, u: np.ndarray) -> np.ndarray:
        return self.diffusion.right_derivative(u)

    def with_initial(self, initial: Any) -> 'Problem':
        return Problem(**{**self._fields(), 'initial': initial})

    def with_horizon(self, T: float) -> 'Problem':
        return Problem(**{**self._fields(), 'T': T})

    def _fields(self) -> Dict[str, Any]:
        return {
            'flux': self.flux, 'diffusion': self.diffusion, 'initial': self.initial,
            'u_max': self.u_max, 'u_c': self.u_c, 'T': self.T,
            'flux_lipschitz': self.flux_lipschitz, 'flux_sup': self.flux_sup,
            'phi_lipschitz': self.phi_lipschitz, 'name': self.name,
            'nondegenerate': self.nondegenerate,
        }

    def describe(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'dimension': self.dimension,
            'u_max': self.u_max,
            'u_c': self.u_c,
            'T': self.T,
            'flux_lipschitz': self.flux_lipschitz,
            'flux_sup': self.flux_sup,
            'phi_lipschitz': self.phi_lipschitz,
            'nondegenerate': self.nondegenerate,
        }


def exact_solution(problem: Problem, lower: np.ndarray,
                   upper: np.ndarray) -> Optional[Callable[[float, np.ndarray], np.ndarray]]:
    """
    Closed-form solution for linear zero-flux diffusion of a cosine mode,
    mean + A cos(kappa (x - a)) exp(-c kappa^2 t); None for any other problem.
    """
    flux, diffusion, datum = problem.flux, problem.diffusion, problem.initial
    if not (isinstance(flux, PolynomialFlux) and flux.is_zero):
        return None
    if not (isinstance(diffusion, PowerDiffusion) and diffusion.p == 1.0 and diffusion.u_c == 0.0):
        return None
    if not isinstance(datum, CosineDatum):
        return None

    a = float(lower[datum.axis])
    kappa = datum.wavenumber * np.pi / (float(upper[datum.axis]) - a)
    rate = diffusion.c * kappa ** 2

    def solution(t: float, points: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(points)[:, datum.axis]
        return datum.mean + datum.amplitude * np.cos(kappa * (x - a)) * np.exp(-rate * t)

    return solution
