import logging
import sys
from pathlib import Path

from zeroflux.config.settings import get_settings

PACKAGE_LOGGER = 'zeroflux'
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


def _configure(logger: logging.Logger) -> None:
    settings = get_settings()
    level = getattr(logging, settings.log_level.upper(), logging.INFO)
    logger.setLevel(level)
    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

    # Console handler
    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    # File handler
    if settings.log_to_file:
        log_dir = Path(settings.log_dir)
        log_dir.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_dir / 'zeroflux.log')
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)


def get_logger(name: str) -> logging.Logger:
    """
    Get or create a logger with consistent configuration

    Loggers below the package namespace share the handlers of the
    package logger; any other name gets its own handlers.

    Args:
        name: Logger name (usually __name__ from calling module)

    Returns:
        Configured logger instance
    """
    package = logging.getLogger(PACKAGE_LOGGER)
    if not package.handlers:
        _configure(package)

    logger = logging.getLogger(name)
    inside = name == PACKAGE_LOGGER or name.startswith(PACKAGE_LOGGER + '.')
    if not inside and not logger.handlers:
        _configure(logger)
    return logger


def set_level(level: str) -> None:
    """Change the level of the package logger (and so of every module logger)."""
    numeric = getattr(logging, level.upper(), None)
    if not isinstance(numeric, int):
        raise ValueError(f"Unknown log level: {level}")
    logging.getLogger(PACKAGE_LOGGER).setLevel(numeric)


# Create a default logger instance for convenience
logger = get_logger(PACKAGE_LOGGER)
