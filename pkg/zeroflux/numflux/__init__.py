"""Monotone numerical convection fluxes, entropy fluxes and their axiom checks."""

from zeroflux.numflux.axioms import FluxAxiomReport, check_flux_axioms
from zeroflux.numflux.schemes import (
    SCHEMES,
    EntropyKind,
    FaceGeometry,
    FluxScheme,
    GodunovFlux,
    RusanovFlux,
    make_scheme,
)

__all__ = [
    "EntropyKind",
    "FaceGeometry",
    "FluxAxiomReport",
    "FluxScheme",
    "GodunovFlux",
    "RusanovFlux",
    "SCHEMES",
    "check_flux_axioms",
    "make_scheme",
]
