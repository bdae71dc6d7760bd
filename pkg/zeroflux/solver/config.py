"""Solver configuration and per-step solve reports."""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List

from zeroflux.utils.errors import InvalidArgumentError


@dataclass
class SolverConfig:
    """Nonlinear solve configuration for one implicit step."""
    newton_tol: float = 1e-10  # on the scaled residual
    max_newton_iters: int = 50
    line_search_factor: float = 0.5
    max_line_search_halvings: int = 30
    phi_kink_regularization: float = 1e-9  # floor on phi' in the Jacobian
    picard_fallback: bool = True
    max_picard_iters: int = 2000
    godunov_fd_step: float = 1e-7  # relative to u_max

    def __post_init__(self):
        if not self.newton_tol > 0:
            raise InvalidArgumentError(f"newton_tol must be positive, got {self.newton_tol}")
        if self.phi_kink_regularization < 0:
            raise InvalidArgumentError("phi_kink_regularization must be >= 0")
        if not 0.0 < self.line_search_factor < 1.0:
            raise InvalidArgumentError("line_search_factor must lie in (0, 1)")
        if self.max_newton_iters < 1 or self.max_line_search_halvings < 0:
            raise InvalidArgumentError("iteration limits must be positive")
        if self.max_picard_iters < 0:
            raise InvalidArgumentError("max_picard_iters must be >= 0")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class SolveReport:
    """Outcome of solve_step for one time level."""
    step: int
    iterations: int  # accepted Newton updates
    final_residual: float
    residual_target: float
    converged: bool = True
    fallback_used: bool = False
    picard_iterations: int = 0
    line_search_halvings: int = 0
    residual_history: List[float] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'step': self.step,
            'iterations': self.iterations,
            'final_residual': self.final_residual,
            'residual_target': self.residual_target,
            'converged': self.converged,
            'fallback_used': self.fallback_used,
            'picard_iterations': self.picard_iterations,
            'line_search_halvings': self.line_search_halvings,
        }
