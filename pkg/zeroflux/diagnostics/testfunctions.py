"""Separable nonnegative test functions xi(t, x) = theta(t) zeta(x)."""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Tuple

import numpy as np

from zeroflux.utils.errors import InvalidArgumentError, InvalidTestFunctionError

TIME_KINDS = ('constant', 'linear_decay', 'exponential')
SPACE_KINDS = ('constant', 'gaussian', 'cosine')


@dataclass(frozen=True)
class TimeWeight:
    """
    theta(t):
        constant      value
        linear_decay  value * (1 - t / horizon)
        exponential   value * exp(-rate t)
    """
    kind: str = 'constant'
    value: float = 1.0
    horizon: float = 1.0
    rate: float = 1.0

    def __post_init__(self):
        if self.kind not in TIME_KINDS:
            raise InvalidArgumentError(f"unknown time weight '{self.kind}'")
        if self.kind == 'linear_decay' and not self.horizon > 0:
            raise InvalidArgumentError("linear_decay needs a positive horizon")

    def __call__(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind == 'constant':
            return np.full(t.shape, self.value)
        if self.kind == 'linear_decay':
            return self.value * (1.0 - t / self.horizon)
        return self.value * np.exp(-self.rate * t)


@dataclass(frozen=True)
class SpaceWeight:
    """
    zeta(x):
        constant  value
        gaussian  value * exp(-|x - center|^2 / (2 width^2))
        cosine    value * (1 + cos(k pi (x_axis - a) / (b - a)))
    """
    kind: str = 'constant'
    value: float = 1.0
    center: Tuple[float, ...] = (0.5,)
    width: float = 0.25
    axis: int = 0
    wavenumber: int = 1

    def __post_init__(self):
        if self.kind not in SPACE_KINDS:
            raise InvalidArgumentError(f"unknown space weight '{self.kind}'")
        if self.kind == 'gaussian' and not self.width > 0:
            raise InvalidArgumentError("gaussian width must be positive")
        object.__setattr__(self, 'center', tuple(float(c) for c in self.center))

    def _centre(self, dim: int) -> np.ndarray:
        centre = np.zeros(dim)
        given = np.asarray(self.center[:dim])
        centre[: given.size] = given
        return centre

    def _phase(self, points, lower, upper) -> Tuple[np.ndarray, float]:
        a, b = float(lower[self.axis]), float(upper[self.axis])
        kappa = self.wavenumber * np.pi / (b - a)
        return kappa * (points[:, self.axis] - a), kappa

    def __call__(self, points: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(points)
        if self.kind == 'constant':
            return np.full(points.shape[0], self.value)
        if self.kind == 'gaussian':
            r2 = np.sum((points - self._centre(points.shape[1])) ** 2, axis=1)
            return self.value * np.exp(-r2 / (2.0 * self.width ** 2))
        phase, _ = self._phase(points, lower, upper)
        return self.value * (1.0 + np.cos(phase))

    def gradient(self, points: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(points)
        grad = np.zeros(points.shape)
        if self.kind == 'gaussian':
            diff = points - self._centre(points.shape[1])
            grad = -diff / self.width ** 2 * self(points, lower, upper)[:, None]
        elif self.kind == 'cosine':
            phase, kappa = self._phase(points, lower, upper)
            grad[:, self.axis] = -self.value * kappa * np.sin(phase)
        return grad


@dataclass(frozen=True)
class TestFunction:
    """xi(t, x) = theta(t) zeta(x)."""
    __test__ = False  # keep pytest from collecting this class

    time: TimeWeight = field(default_factory=TimeWeight)
    space: SpaceWeight = field(default_factory=SpaceWeight)
    label: str = 'xi'

    def to_dict(self) -> Dict[str, Any]:
        return {'label': self.label, 'time': asdict(self.time), 'space': asdict(self.space)}


def require_nonnegative(values: np.ndarray, what: str) -> None:
    values = np.asarray(values)
    if values.size and float(values.min()) < 0.0:
        raise InvalidTestFunctionError(
            f"invalid test function: {what} takes the negative value {values.min():.3e}"
        )


def default_test_functions(T: float, lower: np.ndarray, upper: np.ndarray) -> Tuple[TestFunction, ...]:
    """Three fixed nonnegative test functions adapted to the domain and horizon."""
    centre = tuple(0.5 * (np.asarray(lower) + np.asarray(upper)))
    width = 0.2 * float(np.min(np.asarray(upper) - np.asarray(lower)))
    return (
        TestFunction(TimeWeight('constant'), SpaceWeight('constant'), 'one'),
        TestFunction(TimeWeight('linear_decay', horizon=T), SpaceWeight('gaussian', center=centre, width=width),
                     'decay_gaussian'),
        TestFunction(TimeWeight('exponential', rate=1.0), SpaceWeight('cosine'), 'exp_cosine'),
    )
