"""
Preset problems covering the three convergence regimes.

    heat                - f = 0, phi(u) = u, u_c = 0 (uniformly parabolic)
    burgers_hyperbolic  - f(u) = u(1-u), phi = 0, u_c = u_max (pure transport)
    burgers_degenerate  - f(u) = u(1-u), phi(u) = ((u - 1/2)^+)^2 (1D, 0 < u_c < u_max)
    porous_medium       - f = 0, phi(u) = u^2, u_c = 0
"""

from typing import Any, Callable, Dict, Optional

from zeroflux.problem.model import (
    CosineDatum,
    PolynomialFlux,
    PowerDiffusion,
    Problem,
    StepDatum,
)
from zeroflux.utils.errors import InvalidArgumentError

# Declared Lipschitz constants sit 1% above the exact sup |f'|
LIPSCHITZ_MARGIN = 1.01

BURGERS = (0.0, 1.0, -1.0)


def _zero_flux(dimension: int) -> PolynomialFlux:
    return PolynomialFlux(tuple((0.0,) for _ in range(dimension)))


def _burgers_flux(dimension: int) -> PolynomialFlux:
    if dimension != 1:
        raise InvalidArgumentError("the Burgers presets are one-dimensional")
    return PolynomialFlux((BURGERS,))


def _heat(dimension: int) -> Dict[str, Any]:
    return dict(
        flux=_zero_flux(dimension),
        diffusion=PowerDiffusion(c=1.0, p=1.0, u_c=0.0),
        initial=CosineDatum(mean=0.5, amplitude=0.4),
        u_c=0.0,
        T=0.1,
        flux_lipschitz=0.0,
        flux_sup=0.0,
        phi_lipschitz=1.0,
    )


def _burgers_hyperbolic(dimension: int) -> Dict[str, Any]:
    return dict(
        flux=_burgers_flux(dimension),
        diffusion=PowerDiffusion(c=0.0, p=1.0, u_c=1.0),
        initial=StepDatum(left=1.0, right=0.0, position=0.5),
        u_c=1.0,
        T=0.5,
        flux_lipschitz=LIPSCHITZ_MARGIN * 1.0,
        flux_sup=0.25,
        phi_lipschitz=0.0,
    )


def _burgers_degenerate(dimension: int) -> Dict[str, Any]:
    return dict(
        flux=_burgers_flux(dimension),
        diffusion=PowerDiffusion(c=1.0, p=2.0, u_c=0.5),
        initial=StepDatum(left=1.0, right=0.0, position=0.5),
        u_c=0.5,
        T=0.5,
        flux_lipschitz=LIPSCHITZ_MARGIN * 1.0,
        flux_sup=0.25,
        phi_lipschitz=1.0,
        # f(u) = u(1-u) is strictly concave on [0, u_c]
        nondegenerate=True,
    )


def _porous_medium(dimension: int) -> Dict[str, Any]:
    return dict(
        flux=_zero_flux(dimension),
        diffusion=PowerDiffusion(c=1.0, p=2.0, u_c=0.0),
        initial=StepDatum(left=1.0, right=0.0, position=0.5),
        u_c=0.0,
        T=0.5,
        flux_lipschitz=0.0,
        flux_sup=0.0,
        phi_lipschitz=2.0,
    )


PRESETS: Dict[str, Callable[[int], Dict[str, Any]]] = {
    'heat': _heat,
    'burgers_hyperbolic': _burgers_hyperbolic,
    'burgers_degenerate': _burgers_degenerate,
    'porous_medium': _porous_medium,
}


def preset_names() -> list[str]:
    return sorted(PRESETS)


def preset(name: str, dimension: int = 1, initial: Optional[Any] = None,
           T: Optional[float] = None) -> Problem:
    """Build a preset problem; `initial` and `T` override the preset defaults."""
    if name not in PRESETS:
        raise InvalidArgumentError(
            f"unknown preset '{name}'; expected one of {', '.join(preset_names())}"
        )
    if dimension not in (1, 2):
        raise InvalidArgumentError(f"dimension must be 1 or 2, got {dimension}")
    data = PRESETS[name](dimension)
    if initial is not None:
        data['initial'] = initial
    if T is not None:
        data['T'] = T
    return Problem(name=name, u_max=1.0, **data)
