"""
zeroflux - implicit finite-volume solver and certificate diagnostics for
u_t + div f(u) - lap phi(u) = 0 with zero-flux boundary conditions.
"""

from zeroflux.utils.logger import logger

__version__ = "1.0.0"

__all__ = ["__version__", "logger"]
