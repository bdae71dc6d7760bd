"""Model data of the zero-flux degenerate convection-diffusion problem."""

from zeroflux.problem.model import (
    CallableDatum,
    CallableDiffusion,
    CallableFlux,
    ConstantDatum,
    CosineDatum,
    LinearDatum,
    PolynomialFlux,
    PowerDiffusion,
    Problem,
    StepDatum,
    TableDatum,
    exact_solution,
)
from zeroflux.problem.presets import PRESETS, preset, preset_names
from zeroflux.problem.validation import AxiomCheck, ValidationReport, validate

__all__ = [
    "AxiomCheck",
    "CallableDatum",
    "CallableDiffusion",
    "CallableFlux",
    "ConstantDatum",
    "CosineDatum",
    "LinearDatum",
    "PRESETS",
    "PolynomialFlux",
    "PowerDiffusion",
    "Problem",
    "StepDatum",
    "TableDatum",
    "ValidationReport",
    "exact_solution",
    "preset",
    "preset_names",
    "validate",
]
