"""JSON summary and CSV cell-geometry export for meshes."""

from pathlib import Path
from typing import Any, Dict, Union

import pandas as pd

from zeroflux.config.settings import get_settings
from zeroflux.mesh.mesh import Mesh, alpha_best

AXIS_NAMES = ('x', 'y')


def mesh_summary(mesh: Mesh) -> Dict[str, Any]:
    return {
        'dimension': mesh.dimension,
        'cell_count': mesh.n_cells,
        'interior_face_count': mesh.n_interior,
        'boundary_face_count': mesh.n_boundary,
        'h': mesh.h,
        'alpha_best': alpha_best(mesh),
    }


def cells_frame(mesh: Mesh) -> pd.DataFrame:
    """One row per cell: id, center coordinates, measure."""
    data = {'cell_id': range(mesh.n_cells)}
    for axis in range(mesh.dimension):
        data[AXIS_NAMES[axis]] = mesh.cell_centers[:, axis]
    data['measure'] = mesh.cell_measures
    return pd.DataFrame(data)


def export_cells_csv(mesh: Mesh, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    cells_frame(mesh).to_csv(
        path, index=False, float_format=get_settings().csv_float_format
    )
    return path
