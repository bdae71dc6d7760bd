"""Configuration-driven runner: single runs, refinement studies and static checks."""

from zeroflux.cli.check import check
from zeroflux.cli.runner import RunResult, hard_invariants, run, simulate
from zeroflux.cli.study import StudyResult, cauchy_differences, exact_l1_error, refine_study

__all__ = [
    "RunResult",
    "StudyResult",
    "cauchy_differences",
    "check",
    "exact_l1_error",
    "hard_invariants",
    "refine_study",
    "run",
    "simulate",
]
