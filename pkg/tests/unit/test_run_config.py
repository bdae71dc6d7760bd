"""
Unit Tests for Run Configurations

Tests verify:
1. Preset and inline problem sections (validation errors as ConfigError)
2. dt rules ("= h" or a positive number) and dimension checks
3. JSON loading errors with line/column locations
4. Stable configuration hashes
5. Nested refinement of mesh and dt

Run with: pytest tests/unit/test_run_config.py -v
"""

import json
from pathlib import Path

import numpy as np
import pytest

from zeroflux.config.run_config import RunConfig, load_run_config, parse_run_config
from zeroflux.numflux import GodunovFlux, RusanovFlux
from zeroflux.problem import CosineDatum, StepDatum
from zeroflux.utils.errors import ConfigError

CONFIG_DIR = Path(__file__).resolve().parents[2] / 'configs'


# ═══════════════════════════════════════════════════════════════════
# Fixtures
# ═══════════════════════════════════════════════════════════════════


@pytest.fixture
def preset_data():
    return {
        'problem': {'preset': 'burgers_degenerate'},
        'mesh': {'kind': 'interval', 'counts': [40]},
        'dt': '= h',
    }


@pytest.fixture
def inline_data():
    return {
        'problem': {
            'flux_poly': [[0.0, 2.0, -2.0]],
            'phi': {'c': 0.5, 'p': 1.0, 'u_c': 0.3},
            'u0': {'kind': 'step', 'left': 0.9, 'right': 0.1, 'position': 0.4},
            'T': 0.25,
        },
        'mesh': {'kind': 'interval', 'counts': [30]},
        'scheme': {'name': 'rusanov'},
    }


def _issue_locations(error: ConfigError):
    return [location for location, _ in error.issues]


# ═══════════════════════════════════════════════════════════════════
# Problem sections
# ═══════════════════════════════════════════════════════════════════


class TestProblemSection:
    """Presets, inline problems and their validation"""

    def test_preset(self, preset_data):
        config = parse_run_config(preset_data)
        problem = config.build_problem()
        assert problem.name == 'burgers_degenerate'
        assert problem.u_c == 0.5

    def test_preset_overrides(self, preset_data):
        preset_data['problem'].update({'T': 0.2, 'u0': {'kind': 'cosine', 'mean': 0.5, 'amplitude': 0.3}})
        problem = parse_run_config(preset_data).build_problem()
        assert problem.T == 0.2
        assert isinstance(problem.initial, CosineDatum)

    def test_unknown_preset(self, preset_data):
        preset_data['problem']['preset'] = 'navier_stokes'
        with pytest.raises(ConfigError) as info:
            parse_run_config(preset_data)
        assert 'problem.preset' in _issue_locations(info.value)

    def test_preset_rejects_inline_fields(self, preset_data):
        preset_data['problem']['phi'] = {'c': 1.0}
        with pytest.raises(ConfigError):
            parse_run_config(preset_data)

    def test_inline_problem(self, inline_data):
        problem = parse_run_config(inline_data).build_problem()
        np.testing.assert_allclose(problem.flux.evaluate(np.array([0.5]))[:, 0], [0.5])
        assert problem.u_c == 0.3
        assert problem.flux_lipschitz == pytest.approx(1.01 * 2.0)
        assert isinstance(problem.initial, StepDatum)

    def test_inline_without_diffusion_threshold_defaults_to_u_max(self, inline_data):
        inline_data['problem']['phi'] = {'c': 0.0}
        assert parse_run_config(inline_data).build_problem().u_c == 1.0

    def test_inline_needs_u0_and_T(self, inline_data):
        del inline_data['problem']['T']
        with pytest.raises(ConfigError):
            parse_run_config(inline_data)

    def test_datum_missing_fields(self, preset_data):
        preset_data['problem']['u0'] = {'kind': 'step', 'left': 1.0}
        with pytest.raises(ConfigError, match='right, position'):
            parse_run_config(preset_data)

    def test_unknown_keys_are_rejected(self, preset_data):
        preset_data['mesh']['cells'] = 10
        with pytest.raises(ConfigError) as info:
            parse_run_config(preset_data)
        assert 'mesh.cells' in _issue_locations(info.value)

    def test_phi_exponent_below_one(self, inline_data):
        inline_data['problem']['phi']['p'] = 0.5
        with pytest.raises(ConfigError) as info:
            parse_run_config(inline_data)
        assert 'problem.phi.p' in _issue_locations(info.value)


# ═══════════════════════════════════════════════════════════════════
# Mesh, scheme and dt
# ═══════════════════════════════════════════════════════════════════


class TestMeshSchemeAndDt:
    """Builders and the dt rule"""

    @pytest.mark.parametrize('rule', ['h', '=h', '= h'])
    def test_dt_rules(self, preset_data, rule):
        preset_data['dt'] = rule
        config = parse_run_config(preset_data)
        assert config.dt_follows_h
        assert config.resolve_dt(config.build_mesh()) == pytest.approx(1.0 / 40)

    def test_fixed_dt(self, preset_data):
        preset_data['dt'] = 0.01
        config = parse_run_config(preset_data)
        assert not config.dt_follows_h
        assert config.resolve_dt(config.build_mesh()) == 0.01

    @pytest.mark.parametrize('dt', [0.0, -0.1, 'h/2'])
    def test_bad_dt(self, preset_data, dt):
        preset_data['dt'] = dt
        with pytest.raises(ConfigError) as info:
            parse_run_config(preset_data)
        assert any(location.startswith('dt') for location in _issue_locations(info.value))

    def test_dimension_mismatch(self, preset_data):
        preset_data['mesh'] = {'kind': 'rect', 'counts': [4, 4]}
        with pytest.raises(ConfigError):
            parse_run_config(preset_data)

    def test_rect_mesh_with_bounds(self):
        config = parse_run_config({
            'problem': {'preset': 'heat'},
            'mesh': {'kind': 'rect', 'counts': [4, 2], 'bounds': [[0.0, 2.0], [0.0, 1.0]]},
        })
        mesh = config.build_mesh()
        assert mesh.n_cells == 8
        np.testing.assert_allclose(mesh.cell_measures, 0.25)

    def test_graded_interval(self, preset_data):
        preset_data['mesh'] = {'kind': 'interval', 'counts': [3], 'grading': 2.0}
        mesh = parse_run_config(preset_data).build_mesh()
        np.testing.assert_allclose(mesh.cell_measures, [1 / 7, 2 / 7, 4 / 7])

    def test_bad_counts(self, preset_data):
        preset_data['mesh']['counts'] = [0]
        with pytest.raises(ConfigError):
            parse_run_config(preset_data)

    def test_scheme(self, preset_data, inline_data):
        config = parse_run_config(preset_data)
        assert isinstance(config.build_scheme(config.build_problem()), GodunovFlux)
        config = parse_run_config(inline_data)
        assert isinstance(config.build_scheme(config.build_problem()), RusanovFlux)

    def test_unknown_scheme(self, preset_data):
        preset_data['scheme'] = {'name': 'roe'}
        with pytest.raises(ConfigError):
            parse_run_config(preset_data)

    def test_output_dir(self, preset_data, tmp_path):
        config = parse_run_config(preset_data)
        assert config.resolve_output_dir().name == 'burgers_degenerate_40'
        assert config.resolve_output_dir(tmp_path) == tmp_path

    def test_diagnostics_options(self, preset_data):
        preset_data['diagnostics'] = {
            'entropy_kinds': ['full'],
            'test_functions': [{'label': 'bump', 'space': {'kind': 'gaussian', 'width': 0.1}}],
        }
        options = parse_run_config(preset_data).diagnostics.build()
        assert options.entropy_kinds == ('full',)
        assert options.test_functions[0].label == 'bump'
        assert options.test_functions[0].space.center == (0.5,)


# ═══════════════════════════════════════════════════════════════════
# Hashing and refinement
# ═══════════════════════════════════════════════════════════════════


class TestHashAndRefinement:
    """config_hash() and refined()"""

    def test_hash_is_stable_across_spellings(self, preset_data):
        spelled = dict(preset_data, dt='h')
        reordered = {'dt': '=h', 'mesh': preset_data['mesh'], 'problem': preset_data['problem']}
        hashes = {parse_run_config(d).config_hash() for d in (preset_data, spelled, reordered)}
        assert len(hashes) == 1

    def test_hash_changes_with_content(self, preset_data):
        other = dict(preset_data, mesh={'kind': 'interval', 'counts': [41]})
        assert parse_run_config(preset_data).config_hash() != parse_run_config(other).config_hash()

    def test_canonical_round_trip(self, inline_data):
        config = parse_run_config(inline_data)
        again = parse_run_config(json.loads(json.dumps(config.canonical())))
        assert again.config_hash() == config.config_hash()

    def test_refined_follows_h(self, preset_data):
        config = parse_run_config(preset_data)
        level2 = config.refined(2)
        assert level2.mesh.counts == [160]
        assert level2.resolve_dt(level2.build_mesh()) == pytest.approx(1.0 / 160)

    def test_refined_keeps_fixed_dt(self, preset_data):
        preset_data['dt'] = 0.01
        assert parse_run_config(preset_data).refined(3).dt == 0.01

    def test_refined_grading_nests(self, preset_data):
        preset_data['mesh'] = {'kind': 'interval', 'counts': [4], 'grading': 1.5}
        config = parse_run_config(preset_data)
        coarse = config.build_mesh().edges[0]
        fine = config.refined(1).build_mesh().edges[0]
        np.testing.assert_allclose(fine[::2], coarse, atol=1e-14)


# ═══════════════════════════════════════════════════════════════════
# Loading
# ═══════════════════════════════════════════════════════════════════


class TestLoadRunConfig:
    """File-level errors"""

    def test_shipped_configs_load(self):
        paths = sorted(CONFIG_DIR.glob('*.json'))
        assert paths
        for path in paths:
            assert isinstance(load_run_config(path), RunConfig)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match='cannot read'):
            load_run_config(tmp_path / 'absent.json')

    def test_malformed_json_reports_position(self, tmp_path):
        path = tmp_path / 'broken.json'
        path.write_text('{\n  "problem": {"preset": "heat"},\n  "mesh": \n}\n')
        with pytest.raises(ConfigError) as info:
            load_run_config(path)
        location, _ = info.value.issues[0]
        assert location.startswith('line 4 column')

    def test_root_must_be_object(self, tmp_path):
        path = tmp_path / 'list.json'
        path.write_text('[1, 2]')
        with pytest.raises(ConfigError, match='malformed configuration'):
            load_run_config(path)
