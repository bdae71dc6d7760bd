"""
Error taxonomy shared by every zeroflux module.

Callers that only care about argument problems can keep catching
ValueError; the solver's hard failures are RuntimeErrors.
"""

from typing import Any, Dict, List, Optional, Tuple


class ZerofluxError(Exception):
    """Base class for all zeroflux errors."""


class InvalidArgumentError(ZerofluxError, ValueError):
    """An operation was called with arguments outside its contract."""


class InvalidTestFunctionError(InvalidArgumentError):
    """A test function took a negative value on a quadrature point."""


class FluxDomainError(ZerofluxError, ValueError):
    """A flux argument left [0, u_max] by more than the allowed slack."""

    def __init__(self, value: float, lower: float, upper: float):
        self.value = value
        self.lower = lower
        self.upper = upper
        super().__init__(
            f"flux argument {value!r} outside admissible range [{lower}, {upper}]"
        )


class InvalidInitialDatumError(ZerofluxError, ValueError):
    """Initial cell averages fall outside [0, u_max]."""


class ConfigError(ZerofluxError, ValueError):
    """A run configuration could not be parsed or validated."""

    def __init__(self, message: str, issues: Optional[List[Tuple[str, str]]] = None):
        self.issues = issues or []
        details = "; ".join(f"{loc}: {msg}" for loc, msg in self.issues)
        super().__init__(f"{message}: {details}" if details else message)


class StepFailure(ZerofluxError, RuntimeError):
    """
    Nonlinear solve did not converge after Newton and the Picard fallback.

    `dump` holds the state needed to reproduce the failure; `trajectory` is
    set by march() to the levels computed before the failing step.
    """

    def __init__(self, message: str, dump: Optional[Dict[str, Any]] = None):
        self.dump = dump or {}
        self.trajectory = None
        super().__init__(message)
