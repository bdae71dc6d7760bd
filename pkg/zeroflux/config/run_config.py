"""
Run configuration: one JSON document describing problem, mesh, scheme,
time step, solver, diagnostics and output.

Usage:
    config = load_run_config("configs/burgers_degenerate.json")
    problem = config.build_problem()
    mesh = config.build_mesh()
    dt = config.resolve_dt(mesh)

Every physical function is one of the serializable families of
zeroflux.problem, so a validated config round-trips through JSON and
hashes to a stable identifier.
"""

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from zeroflux.config.settings import settings
from zeroflux.diagnostics.report import DiagnosticsOptions
from zeroflux.diagnostics.testfunctions import SpaceWeight, TestFunction, TimeWeight
from zeroflux.mesh.mesh import Mesh, build_tensor_mesh, graded_nodes
from zeroflux.numflux.schemes import SCHEMES, FluxScheme, make_scheme
from zeroflux.problem.model import (
    ConstantDatum,
    CosineDatum,
    LinearDatum,
    PolynomialFlux,
    PowerDiffusion,
    Problem,
    StepDatum,
    TableDatum,
)
from zeroflux.problem.presets import PRESETS, preset, preset_names
from zeroflux.solver.config import SolverConfig
from zeroflux.utils.errors import ConfigError

DT_RULES = ('h', '=h')

DATUM_FIELDS = {
    'constant': ('value',),
    'step': ('left', 'right', 'position'),
    'cosine': ('mean', 'amplitude'),
    'linear': ('offset', 'slope'),
    'table': ('breakpoints', 'values'),
}


class _Section(BaseModel):
    model_config = ConfigDict(extra='forbid')


# ═══════════════════════════════════════════════════════════════════
# Problem
# ═══════════════════════════════════════════════════════════════════

class PhiConfig(_Section):
    """phi(u) = c ((u - u_c)^+)^p"""
    c: float = Field(1.0, ge=0.0)
    p: float = Field(1.0, ge=1.0)
    u_c: float = Field(0.0, ge=0.0)


class InitialConfig(_Section):
    kind: Literal['constant', 'step', 'cosine', 'linear', 'table']
    axis: int = Field(0, ge=0, le=1)
    value: Optional[float] = None
    left: Optional[float] = None
    right: Optional[float] = None
    position: Optional[float] = None
    mean: Optional[float] = None
    amplitude: Optional[float] = None
    wavenumber: int = Field(1, ge=0)
    offset: Optional[float] = None
    slope: Optional[float] = None
    breakpoints: Optional[List[float]] = None
    values: Optional[List[float]] = None

    @model_validator(mode='after')
    def _check_kind_fields(self) -> 'InitialConfig':
        missing = [name for name in DATUM_FIELDS[self.kind] if getattr(self, name) is None]
        if missing:
            raise ValueError(f"initial datum '{self.kind}' needs {', '.join(missing)}")
        return self

    def build(self):
        if self.kind == 'constant':
            return ConstantDatum(self.value)
        if self.kind == 'step':
            return StepDatum(self.left, self.right, self.position, axis=self.axis)
        if self.kind == 'cosine':
            return CosineDatum(self.mean, self.amplitude, wavenumber=self.wavenumber, axis=self.axis)
        if self.kind == 'linear':
            return LinearDatum(self.offset, self.slope, axis=self.axis)
        return TableDatum(tuple(self.breakpoints), tuple(self.values), axis=self.axis)


class ProblemConfig(_Section):
    """Either a preset (optionally with u0 / T overrides) or an inline polynomial flux and power phi."""
    preset: Optional[str] = None
    flux_poly: Optional[List[List[float]]] = None
    phi: Optional[PhiConfig] = None
    u_max: float = Field(1.0, gt=0.0)
    u_c: Optional[float] = Field(None, ge=0.0)
    u0: Optional[InitialConfig] = None
    T: Optional[float] = Field(None, gt=0.0)
    flux_lipschitz: Optional[float] = Field(None, ge=0.0)
    name: Optional[str] = None

    @field_validator('preset')
    @classmethod
    def _known_preset(cls, value: Optional[str]) -> Optional[str]:
        if value is not None and value not in PRESETS:
            raise ValueError(f"unknown preset '{value}'; expected one of {', '.join(preset_names())}")
        return value

    @model_validator(mode='after')
    def _preset_or_inline(self) -> 'ProblemConfig':
        if self.preset is not None:
            inline = [k for k in ('flux_poly', 'phi', 'u_c', 'flux_lipschitz') if getattr(self, k) is not None]
            if inline:
                raise ValueError(f"preset problems take no {', '.join(inline)}")
            if self.u_max != 1.0:
                raise ValueError("preset problems have u_max = 1")
            return self
        if self.flux_poly is None or self.phi is None:
            raise ValueError("an inline problem needs flux_poly and phi")
        if self.u0 is None or self.T is None:
            raise ValueError("an inline problem needs u0 and T")
        return self


# ═══════════════════════════════════════════════════════════════════
# Mesh, scheme, diagnostics
# ═══════════════════════════════════════════════════════════════════

class MeshConfig(_Section):
    kind: Literal['interval', 'rect'] = 'interval'
    counts: List[int]
    bounds: Optional[List[Tuple[float, float]]] = None
    grading: float = Field(1.0, gt=0.0)

    @property
    def dimension(self) -> int:
        return 1 if self.kind == 'interval' else 2

    @model_validator(mode='after')
    def _check_shape(self) -> 'MeshConfig':
        dim = self.dimension
        if self.bounds is None:
            self.bounds = [(0.0, 1.0)] * dim
        if len(self.counts) != dim or len(self.bounds) != dim:
            raise ValueError(f"a {self.kind} mesh needs {dim} counts and {dim} bounds")
        if any(n < 1 for n in self.counts):
            raise ValueError("cell counts must be >= 1")
        if any(not a < b for a, b in self.bounds):
            raise ValueError("bounds must satisfy lower < upper")
        return self

    def refined(self, level: int) -> 'MeshConfig':
        """Level `level` of a nested refinement: counts x 2^level, grading^(1/2^level)."""
        factor = 2 ** level
        return self.model_copy(update={
            'counts': [n * factor for n in self.counts],
            'grading': self.grading ** (1.0 / factor),
        })


class SchemeConfig(_Section):
    name: str = 'godunov'
    speed_bound: Optional[float] = Field(None, ge=0.0)

    @field_validator('name')
    @classmethod
    def _known_scheme(cls, value: str) -> str:
        if value not in SCHEMES:
            raise ValueError(f"unknown scheme '{value}'; expected one of {', '.join(sorted(SCHEMES))}")
        return value


class SolverSection(_Section):
    newton_tol: float = Field(1e-10, gt=0.0)
    max_newton_iters: int = Field(50, ge=1)
    line_search_factor: float = Field(0.5, gt=0.0, lt=1.0)
    max_line_search_halvings: int = Field(30, ge=0)
    phi_kink_regularization: float = Field(1e-9, ge=0.0)
    picard_fallback: bool = True
    max_picard_iters: int = Field(2000, ge=0)
    godunov_fd_step: float = Field(1e-7, gt=0.0)

    def build(self) -> SolverConfig:
        return SolverConfig(**self.model_dump())


class TimeWeightConfig(_Section):
    kind: Literal['constant', 'linear_decay', 'exponential'] = 'constant'
    value: float = Field(1.0, ge=0.0)
    horizon: float = Field(1.0, gt=0.0)
    rate: float = 1.0


class SpaceWeightConfig(_Section):
    kind: Literal['constant', 'gaussian', 'cosine'] = 'constant'
    value: float = Field(1.0, ge=0.0)
    center: List[float] = Field(default_factory=lambda: [0.5])
    width: float = Field(0.25, gt=0.0)
    axis: int = Field(0, ge=0, le=1)
    wavenumber: int = Field(1, ge=0)


class TestFunctionConfig(_Section):
    __test__ = False

    label: str = 'xi'
    time: TimeWeightConfig = Field(default_factory=TimeWeightConfig)
    space: SpaceWeightConfig = Field(default_factory=SpaceWeightConfig)

    def build(self) -> TestFunction:
        space = self.space.model_dump()
        space['center'] = tuple(space['center'])
        return TestFunction(TimeWeight(**self.time.model_dump()), SpaceWeight(**space), self.label)


class DiagnosticsConfig(_Section):
    enabled: bool = True
    k_grid_size: int = Field(33, ge=2)
    entropy_kinds: List[Literal['sub', 'super', 'full']] = Field(default_factory=lambda: ['sub', 'super', 'full'])
    space_offsets: List[float] = Field(default_factory=lambda: [1.0, 0.5, 0.25])
    space_direction: Optional[List[float]] = None
    time_offsets: List[float] = Field(default_factory=lambda: [1.0, 2.0, 4.0])
    entropy_levels: List[float] = Field(default_factory=lambda: [0.1, 0.3, 0.7])
    test_functions: Optional[List[TestFunctionConfig]] = None
    weak_bv: bool = True
    translates: bool = True
    continuous_entropy: bool = True

    @field_validator('space_offsets', 'time_offsets')
    @classmethod
    def _positive_offsets(cls, values: List[float]) -> List[float]:
        if any(not v > 0 for v in values):
            raise ValueError("offsets must be positive multiples of h / dt")
        return values

    def build(self) -> DiagnosticsOptions:
        tests = None if self.test_functions is None else [t.build() for t in self.test_functions]
        return DiagnosticsOptions(
            k_grid_size=self.k_grid_size,
            entropy_kinds=tuple(self.entropy_kinds),
            space_offsets=tuple(self.space_offsets),
            space_direction=None if self.space_direction is None else tuple(self.space_direction),
            time_offsets=tuple(self.time_offsets),
            entropy_levels=tuple(self.entropy_levels),
            test_functions=tests,
            weak_bv=self.weak_bv,
            translates=self.translates,
            continuous_entropy=self.continuous_entropy,
        )


# ═══════════════════════════════════════════════════════════════════
# Run configuration
# ═══════════════════════════════════════════════════════════════════

class RunConfig(_Section):
    problem: ProblemConfig
    mesh: MeshConfig
    scheme: SchemeConfig = Field(default_factory=SchemeConfig)
    dt: Union[float, str] = 'h'
    solver: SolverSection = Field(default_factory=SolverSection)
    diagnostics: DiagnosticsConfig = Field(default_factory=DiagnosticsConfig)
    output_dir: Optional[str] = None
    dump_stride: int = Field(1, ge=1)

    @field_validator('dt')
    @classmethod
    def _dt_rule(cls, value: Union[float, str]) -> Union[float, str]:
        if isinstance(value, str):
            rule = value.replace(' ', '')
            if rule not in DT_RULES:
                raise ValueError(f"dt must be a positive number or \"= h\", got '{value}'")
            return 'h'
        if not value > 0:
            raise ValueError(f"dt must be positive, got {value}")
        return float(value)

    @model_validator(mode='after')
    def _buildable(self) -> 'RunConfig':
        # builds the (cheap) problem so dimension and datum errors surface at load time
        problem = self.build_problem()
        if problem.dimension != self.mesh.dimension:
            raise ValueError(
                f"problem is {problem.dimension}D but the mesh is a {self.mesh.kind} ({self.mesh.dimension}D)"
            )
        return self

    @property
    def dt_follows_h(self) -> bool:
        return self.dt == 'h'

    @property
    def run_name(self) -> str:
        base = self.problem.preset or self.problem.name or 'custom'
        return f"{base}_{'x'.join(str(n) for n in self.mesh.counts)}"

    def build_problem(self) -> Problem:
        section = self.problem
        initial = section.u0.build() if section.u0 is not None else None
        if section.preset is not None:
            return preset(section.preset, dimension=self.mesh.dimension, initial=initial, T=section.T)
        phi = section.phi
        flux = PolynomialFlux(tuple(tuple(c) for c in section.flux_poly))
        u_c = section.u_c
        if u_c is None:
            u_c = phi.u_c if phi.c > 0 else section.u_max
        return Problem(
            flux=flux,
            diffusion=PowerDiffusion(c=phi.c, p=phi.p, u_c=phi.u_c),
            initial=initial,
            u_max=section.u_max,
            u_c=u_c,
            T=section.T,
            flux_lipschitz=section.flux_lipschitz,
            name=section.name or 'custom',
        )

    def build_mesh(self) -> Mesh:
        section = self.mesh
        return build_tensor_mesh([
            graded_nodes(a, b, n, section.grading) for (a, b), n in zip(section.bounds, section.counts)
        ])

    def build_scheme(self, problem: Problem) -> FluxScheme:
        return make_scheme(self.scheme.name, problem, speed_bound=self.scheme.speed_bound,
                           fd_step=self.solver.godunov_fd_step)

    def resolve_dt(self, mesh: Mesh) -> float:
        return float(mesh.h) if self.dt_follows_h else float(self.dt)

    def resolve_output_dir(self, override: Optional[Union[str, Path]] = None) -> Path:
        if override is not None:
            return Path(override)
        if self.output_dir is not None:
            return Path(self.output_dir)
        return Path(settings.output_root) / self.run_name

    def refined(self, level: int) -> 'RunConfig':
        """Config of refinement level `level`: h / 2^level; a dt tied to h follows it, a fixed dt stays."""
        return self.model_copy(update={'mesh': self.mesh.refined(level)})

    def canonical(self) -> Dict[str, Any]:
        return self.model_dump(mode='json')

    def config_hash(self) -> str:
        return hash_payload(self.canonical())


def hash_payload(payload: Dict[str, Any]) -> str:
    data = json.dumps(payload, sort_keys=True).encode('utf-8')
    return hashlib.sha256(data).hexdigest()


def _issues(error: ValidationError) -> List[Tuple[str, str]]:
    issues = []
    for item in error.errors():
        location = '.'.join(str(part) for part in item['loc']) or '<root>'
        issues.append((location, item['msg']))
    return issues


def parse_run_config(data: Dict[str, Any], source: str = '<config>') -> RunConfig:
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"invalid run configuration {source}", _issues(e)) from e


def load_run_config(path: Union[str, Path]) -> RunConfig:
    """Read and validate a JSON run configuration; all failures become ConfigError."""
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror or e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(
            f"malformed JSON in {path}", [(f"line {e.lineno} column {e.colno}", e.msg)]
        ) from e
    if not isinstance(data, dict):
        raise ConfigError(f"malformed configuration in {path}", [('<root>', 'expected a JSON object')])
    return parse_run_config(data, str(path))
