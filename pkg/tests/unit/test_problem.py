"""
Unit Tests for Problem Data

Tests verify:
1. Polynomial fluxes and power diffusions (values, derivatives, exact constants)
2. Initial datum kinds and their exact cell averages
3. Presets (constants, dimensions, overrides)
4. validate(): axiom checks pass for presets and catch broken problems
5. Closed-form heat solution

Run with: pytest tests/unit/test_problem.py -v
"""

import numpy as np
import pytest

from zeroflux.mesh import build_interval_mesh, build_rect_mesh
from zeroflux.problem import (
    CallableDatum,
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
    preset,
    preset_names,
    validate,
)
from zeroflux.utils.errors import InvalidArgumentError


# ═══════════════════════════════════════════════════════════════════
# Fixtures
# ═══════════════════════════════════════════════════════════════════


@pytest.fixture
def burgers_flux():
    """f(u) = u (1 - u)"""
    return PolynomialFlux(((0.0, 1.0, -1.0),))


@pytest.fixture
def mesh4():
    return build_interval_mesh(0.0, 1.0, 4)


def _inline(flux, diffusion, initial=None, **kwargs):
    return Problem(flux=flux, diffusion=diffusion,
                   initial=initial or ConstantDatum(0.5), **kwargs)


# ═══════════════════════════════════════════════════════════════════
# Fluxes and diffusions
# ═══════════════════════════════════════════════════════════════════


class TestPolynomialFlux:
    """Evaluation and exact constants"""

    def test_values_and_derivative(self, burgers_flux):
        np.testing.assert_allclose(burgers_flux.evaluate(np.array([0.3]))[:, 0], [0.21])
        np.testing.assert_allclose(burgers_flux.derivative(np.array([0.3]))[:, 0], [0.4])

    def test_exact_constants(self, burgers_flux):
        assert burgers_flux.sup_norm(0.0, 1.0) == pytest.approx(0.25)
        assert burgers_flux.slope_bound(0.0, 1.0) == pytest.approx(1.0)

    def test_stationary_point(self, burgers_flux):
        np.testing.assert_allclose(burgers_flux.stationary_points([1.0], 0.0, 1.0), [0.5])

    def test_projection_along_negative_normal(self, burgers_flux):
        assert burgers_flux.normal_value(np.array(0.5), [-1.0]) == pytest.approx(-0.25)

    def test_two_components(self):
        flux = PolynomialFlux(((0.0, 1.0, -1.0), (0.0, 2.0, -2.0)))
        assert flux.dimension == 2
        assert flux.sup_norm(0.0, 1.0) == pytest.approx(0.25 * np.sqrt(5.0))

    def test_rejects_empty(self):
        with pytest.raises(InvalidArgumentError):
            PolynomialFlux(((),))

    def test_callable_flux_matches_polynomial(self, burgers_flux):
        flux = CallableFlux(lambda u: u * (1.0 - u))
        grid = np.linspace(0.0, 1.0, 11)
        np.testing.assert_allclose(flux.evaluate(grid), burgers_flux.evaluate(grid))
        assert flux.slope_bound(0.0, 1.0) == pytest.approx(1.0, rel=1e-6)


class TestPowerDiffusion:
    """phi(u) = c ((u - u_c)^+)^p"""

    def test_degenerate_values(self):
        phi = PowerDiffusion(c=1.0, p=2.0, u_c=0.5)
        np.testing.assert_allclose(phi.evaluate(np.array([0.2, 0.5, 1.0])), [0.0, 0.0, 0.25])
        assert phi.lipschitz(1.0) == pytest.approx(1.0)

    def test_right_derivative_at_kink(self):
        linear = PowerDiffusion(c=2.0, p=1.0, u_c=0.3)
        assert linear.right_derivative(np.array([0.3]))[0] == 2.0
        assert linear.right_derivative(np.array([0.2]))[0] == 0.0

    def test_rejects_exponent_below_one(self):
        with pytest.raises(InvalidArgumentError):
            PowerDiffusion(p=0.5)


# ═══════════════════════════════════════════════════════════════════
# Initial data
# ═══════════════════════════════════════════════════════════════════


class TestInitialData:
    """Exact cell averages u_K^0"""

    def test_constant(self, mesh4):
        np.testing.assert_allclose(ConstantDatum(0.4).cell_averages(mesh4), 0.4)

    def test_linear_two_cells(self):
        """u0(x) = x on 2 cells -> (0.25, 0.75)"""
        mesh = build_interval_mesh(0.0, 1.0, 2)
        np.testing.assert_allclose(LinearDatum(0.0, 1.0).cell_averages(mesh), [0.25, 0.75])

    def test_indicator(self, mesh4):
        """Indicator of (0, 0.5) on 4 cells -> (1, 1, 0, 0)"""
        np.testing.assert_allclose(StepDatum(1.0, 0.0, 0.5).cell_averages(mesh4), [1, 1, 0, 0])

    def test_step_cutting_a_cell(self, mesh4):
        np.testing.assert_allclose(StepDatum(1.0, 0.0, 0.375).cell_averages(mesh4), [1, 0.5, 0, 0])

    def test_cosine_average_matches_quadrature(self, mesh4):
        datum = CosineDatum(0.5, 0.4)
        numeric = CallableDatum(lambda x: 0.5 + 0.4 * np.cos(np.pi * x[:, 0]), order=8)
        np.testing.assert_allclose(datum.cell_averages(mesh4), numeric.cell_averages(mesh4), atol=1e-13)

    def test_table(self, mesh4):
        datum = TableDatum((0.25, 0.6), (0.0, 0.8, 0.2))
        expected = [0.0, 0.8, (0.1 * 0.8 + 0.15 * 0.2) / 0.25, 0.2]
        np.testing.assert_allclose(datum.cell_averages(mesh4), expected)

    def test_table_shape_is_validated(self):
        with pytest.raises(InvalidArgumentError):
            TableDatum((0.5,), (1.0,))

    def test_cosine_along_y(self):
        mesh = build_rect_mesh(1.0, 1.0, 2, 2)
        averages = CosineDatum(0.5, 0.4, axis=1).cell_averages(mesh)
        assert averages[0] == pytest.approx(averages[1])
        assert averages[0] > averages[2]


# ═══════════════════════════════════════════════════════════════════
# Presets and validation
# ═══════════════════════════════════════════════════════════════════


class TestPresets:
    """The four preset problems"""

    def test_names(self):
        assert preset_names() == ['burgers_degenerate', 'burgers_hyperbolic', 'heat', 'porous_medium']

    def test_burgers_degenerate_phi(self):
        problem = preset('burgers_degenerate')
        np.testing.assert_allclose(problem.phi(np.array([0.5, 1.0])), [0.0, 0.25])
        assert problem.phi_lipschitz == 1.0
        assert problem.nondegenerate is True

    def test_burgers_hyperbolic_endpoints(self):
        problem = preset('burgers_hyperbolic')
        np.testing.assert_allclose(problem.flux.evaluate(np.array([0.0, 1.0])), 0.0)
        assert problem.u_c == problem.u_max

    def test_heat_has_zero_lipschitz(self):
        assert preset('heat').flux_lipschitz == 0.0

    def test_overrides(self):
        problem = preset('heat', initial=ConstantDatum(0.3), T=0.2)
        assert problem.T == 0.2
        assert isinstance(problem.initial, ConstantDatum)

    def test_two_dimensional_presets(self):
        assert preset('porous_medium', dimension=2).dimension == 2
        with pytest.raises(InvalidArgumentError):
            preset('burgers_degenerate', dimension=2)

    def test_unknown_preset(self):
        with pytest.raises(InvalidArgumentError, match='unknown preset'):
            preset('navier_stokes')

    @pytest.mark.parametrize('name', ['heat', 'burgers_hyperbolic', 'burgers_degenerate', 'porous_medium'])
    def test_validate_passes(self, name, mesh4):
        report = validate(preset(name), mesh=mesh4)
        assert report.passed, report.failures()


class TestValidation:
    """validate() reports broken problems"""

    def test_flux_not_vanishing_at_u_max(self):
        """f(u) = u violates f(u_max) = 0"""
        problem = _inline(PolynomialFlux(((0.0, 1.0),)), PowerDiffusion())
        report = validate(problem)
        assert not report.check('flux_vanishes_at_endpoints').passed

    def test_decreasing_phi(self):
        """phi(u) = -u is not monotone"""
        problem = _inline(PolynomialFlux(((0.0,),)), PowerDiffusion(c=-1.0))
        assert not validate(problem).check('phi_monotone').passed

    def test_understated_lipschitz_constant(self, burgers_flux):
        problem = _inline(burgers_flux, PowerDiffusion(), flux_lipschitz=0.5)
        assert not validate(problem).check('flux_lipschitz').passed

    def test_initial_datum_out_of_range(self, mesh4):
        problem = _inline(PolynomialFlux(((0.0,),)), PowerDiffusion(), initial=ConstantDatum(1.5))
        assert not validate(problem, mesh=mesh4).check('initial_datum_range').passed

    def test_problem_rejects_bad_threshold(self, burgers_flux):
        with pytest.raises(InvalidArgumentError):
            _inline(burgers_flux, PowerDiffusion(), u_c=2.0)

    def test_report_serializes(self):
        data = validate(preset('heat')).to_dict()
        assert data['pass'] is True
        assert {c['name'] for c in data['checks']} >= {'flux_lipschitz', 'phi_monotone'}


class TestExactSolution:
    """Closed form of linear zero-flux diffusion"""

    def test_heat_preset_has_closed_form(self):
        problem = preset('heat')
        solution = exact_solution(problem, np.array([0.0]), np.array([1.0]))
        value = solution(0.1, np.array([[0.0]]))[0]
        assert value == pytest.approx(0.5 + 0.4 * np.exp(-np.pi ** 2 * 0.1))

    def test_nonlinear_problems_have_none(self):
        for name in ('burgers_degenerate', 'porous_medium'):
            assert exact_solution(preset(name), np.array([0.0]), np.array([1.0])) is None
