"""Run-directory writers: per-level state CSVs and JSON documents."""

import json
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd

from zeroflux.config.settings import get_settings
from zeroflux.mesh.export import AXIS_NAMES
from zeroflux.mesh.mesh import CellField
from zeroflux.problem.model import Problem
from zeroflux.solver.config import SolveReport
from zeroflux.utils.errors import ConfigError


def prepare_output_dir(path: Union[str, Path]) -> Path:
    """Create the run directory; an unwritable location is a configuration error."""
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ConfigError(f"cannot create output directory {path}", [('output_dir', str(e))]) from e
    if not os.access(path, os.W_OK):
        raise ConfigError(f"output directory {path} is not writable", [('output_dir', 'not writable')])
    return path


def state_frame(field: CellField, problem: Problem) -> pd.DataFrame:
    mesh = field.mesh
    data: Dict[str, Any] = {'cell_id': np.arange(mesh.n_cells)}
    for axis in range(mesh.dimension):
        data[AXIS_NAMES[axis]] = mesh.cell_centers[:, axis]
    data['u'] = field.values
    data['phi'] = problem.phi(field.values)
    return pd.DataFrame(data)


def write_state_csv(path: Union[str, Path], field: CellField, problem: Problem) -> Path:
    path = Path(path)
    state_frame(field, problem).to_csv(
        path, index=False, float_format=get_settings().csv_float_format
    )
    return path


def jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    return value


def write_json(path: Union[str, Path], payload: Dict[str, Any]) -> Path:
    path = Path(path)
    with open(path, 'w', encoding='utf-8') as fh:
        json.dump(jsonable(payload), fh, indent=2)
        fh.write('\n')
    return path


class StateWriter:
    """
    march() callback writing state_<step>.csv every `stride` levels.

    Level 0 and the final level are always written.
    """

    def __init__(self, directory: Path, problem: Problem, stride: int, final_step: int):
        self.directory = Path(directory)
        self.problem = problem
        self.stride = stride
        self.final_step = final_step
        self.files: List[Path] = []

    def __call__(self, field: CellField, report: Optional[SolveReport]) -> None:
        step = field.level
        if step % self.stride == 0 or step == self.final_step:
            path = self.directory / f"state_{step}.csv"
            self.files.append(write_state_csv(path, field, self.problem))
