"""Certificates computed on trajectories: entropy residuals, a-priori functionals, translates."""

from zeroflux.diagnostics.entropy import (
    continuous_entropy_functional,
    entropy_parts,
    entropy_residual,
    entropy_residual_levels,
)
from zeroflux.diagnostics.functionals import (
    axis_overlaps,
    gradient_l2_norm_sq,
    l2h1_functional,
    linf_bounds,
    mass_drift,
    mass_drift_bound,
    mass_series,
    space_translate_functional,
    time_translate_functional,
    weak_bv_functional,
    weak_bv_scaled,
)
from zeroflux.diagnostics.report import (
    DiagnosticsOptions,
    DiagnosticsReport,
    compute_diagnostics,
    k_grid,
)
from zeroflux.diagnostics.testfunctions import (
    SpaceWeight,
    TestFunction,
    TimeWeight,
    default_test_functions,
)

__all__ = [
    "DiagnosticsOptions",
    "DiagnosticsReport",
    "SpaceWeight",
    "TestFunction",
    "TimeWeight",
    "axis_overlaps",
    "compute_diagnostics",
    "continuous_entropy_functional",
    "default_test_functions",
    "entropy_parts",
    "entropy_residual",
    "entropy_residual_levels",
    "gradient_l2_norm_sq",
    "k_grid",
    "l2h1_functional",
    "linf_bounds",
    "mass_drift",
    "mass_drift_bound",
    "mass_series",
    "space_translate_functional",
    "time_translate_functional",
    "weak_bv_functional",
    "weak_bv_scaled",
]
