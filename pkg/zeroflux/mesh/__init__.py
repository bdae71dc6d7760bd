"""Admissible meshes, discrete gradients and discrete H1 quantities."""

from zeroflux.mesh.export import cells_frame, export_cells_csv, mesh_summary
from zeroflux.mesh.mesh import (
    AdmissibilityReport,
    CellField,
    Mesh,
    alpha_best,
    build_interval_mesh,
    build_rect_mesh,
    build_tensor_mesh,
    cell_count_bound,
    cell_quadrature,
    cell_sample_points,
    check_admissibility,
    diamond_faces,
    diamond_measure,
    diamond_measures,
    discrete_gradient,
    discrete_l2_norm_sq,
    geometric_identity_residual,
    gradient_at,
    gradient_field,
    graded_nodes,
    h1_product,
    h1_seminorm_sq,
    transmissibilities,
    transmissibility,
)

__all__ = [
    "AdmissibilityReport",
    "CellField",
    "Mesh",
    "alpha_best",
    "build_interval_mesh",
    "build_rect_mesh",
    "build_tensor_mesh",
    "cell_count_bound",
    "cell_quadrature",
    "cell_sample_points",
    "cells_frame",
    "check_admissibility",
    "diamond_faces",
    "diamond_measure",
    "diamond_measures",
    "discrete_gradient",
    "discrete_l2_norm_sq",
    "export_cells_csv",
    "geometric_identity_residual",
    "gradient_at",
    "gradient_field",
    "graded_nodes",
    "h1_product",
    "h1_seminorm_sq",
    "mesh_summary",
    "transmissibilities",
    "transmissibility",
]
