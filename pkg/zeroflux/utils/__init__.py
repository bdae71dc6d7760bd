"""Logging helpers and the shared error taxonomy."""

from zeroflux.utils.errors import (
    ConfigError,
    FluxDomainError,
    InvalidArgumentError,
    InvalidInitialDatumError,
    InvalidTestFunctionError,
    StepFailure,
    ZerofluxError,
)
from zeroflux.utils.logger import get_logger, logger

__all__ = [
    "ConfigError",
    "FluxDomainError",
    "InvalidArgumentError",
    "InvalidInitialDatumError",
    "InvalidTestFunctionError",
    "StepFailure",
    "ZerofluxError",
    "get_logger",
    "logger",
]
