"""
Unit Tests for Trajectory Diagnostics

Tests verify:
1. Discrete entropy residuals (vanishing cases, sub + super = full, solver output)
2. Weak BV, L2(H1) and gradient functionals on hand-built trajectories
3. Exact space and time translate functionals
4. Continuous entropy functional (zero test function, constant states, sign errors)
5. Straight-line re-summation of every functional on three cells
6. Invariance of weak BV and L2(H1) under relabeling of cells
7. compute_diagnostics report assembly

Run with: pytest tests/unit/test_diagnostics.py -v
"""

import dataclasses

import numpy as np
import pytest

from zeroflux.diagnostics import (
    DiagnosticsOptions,
    SpaceWeight,
    TestFunction,
    TimeWeight,
    compute_diagnostics,
    continuous_entropy_functional,
    default_test_functions,
    entropy_parts,
    entropy_residual,
    entropy_residual_levels,
    gradient_l2_norm_sq,
    k_grid,
    l2h1_functional,
    mass_drift,
    mass_drift_bound,
    space_translate_functional,
    time_translate_functional,
    weak_bv_functional,
    weak_bv_scaled,
)
from zeroflux.diagnostics.functionals import WEAK_BV_GRID
from zeroflux.mesh import CellField, build_interval_mesh, build_rect_mesh
from zeroflux.numflux import EntropyKind, GodunovFlux
from zeroflux.problem import ConstantDatum, preset
from zeroflux.solver import Trajectory, march
from zeroflux.utils.errors import InvalidArgumentError, InvalidTestFunctionError


# ═══════════════════════════════════════════════════════════════════
# Fixtures
# ═══════════════════════════════════════════════════════════════════


def _trajectory(mesh, problem, dt, levels):
    """Trajectory with the given per-level cell values"""
    fields = [CellField(mesh, values, level=n, time=n * dt) for n, values in enumerate(levels)]
    return Trajectory(mesh=mesh, problem=problem, scheme=GodunovFlux(problem), dt=dt, fields=fields)


@pytest.fixture
def two_cells():
    return build_interval_mesh(0.0, 1.0, 2)


@pytest.fixture
def burgers_run():
    """burgers_degenerate on 20 cells with dt = h"""
    problem = preset('burgers_degenerate')
    mesh = build_interval_mesh(0.0, 1.0, 20)
    return march(mesh, problem, GodunovFlux(problem), dt=mesh.h)


@pytest.fixture
def resting_burgers():
    """Burgers state u = 0 for five steps of 0.1"""
    problem = preset('burgers_degenerate', initial=ConstantDatum(0.0))
    mesh = build_interval_mesh(0.0, 1.0, 8)
    return _trajectory(mesh, problem, 0.1, [np.zeros(8)] * 6)


# ═══════════════════════════════════════════════════════════════════
# Discrete entropy inequality
# ═══════════════════════════════════════════════════════════════════


class TestEntropyResidual:
    """LHS - RHS of the discrete entropy inequality"""

    def test_parts_add_up(self):
        s = np.linspace(0.0, 1.0, 11)
        eta_sub, sign_sub = entropy_parts(s, 0.4, EntropyKind.SUB)
        eta_sup, sign_sup = entropy_parts(s, 0.4, EntropyKind.SUPER)
        eta_full, sign_full = entropy_parts(s, 0.4, EntropyKind.FULL)
        np.testing.assert_allclose(eta_sub + eta_sup, eta_full)
        np.testing.assert_allclose(sign_sub + sign_sup, sign_full)
        assert sign_full[4] == 0.0

    @pytest.mark.parametrize('kind', ['sub', 'super', 'full'])
    def test_constant_heat_state_is_exact(self, two_cells, kind):
        traj = _trajectory(two_cells, preset('heat'), 0.1, [np.full(2, 0.3)] * 3)
        for k in (0.0, 0.3, 0.6, 1.0):
            np.testing.assert_allclose(entropy_residual_levels(traj, k, kind), 0.0, atol=1e-14)

    @pytest.mark.parametrize('kind', ['sub', 'super', 'full'])
    def test_resting_burgers_balances_boundary_terms(self, resting_burgers, kind):
        for k in k_grid(0.5, 1.0, 9):
            assert entropy_residual(resting_burgers, float(k), kind) <= 1e-14

    def test_full_is_sub_plus_super(self, burgers_run):
        for k in (0.2, 0.5, 0.8):
            full = entropy_residual_levels(burgers_run, k, 'full')
            sub = entropy_residual_levels(burgers_run, k, 'sub')
            sup = entropy_residual_levels(burgers_run, k, 'super')
            np.testing.assert_allclose(full, sub + sup, atol=1e-12)
            assert entropy_residual(burgers_run, k, 'full') <= (
                entropy_residual(burgers_run, k, 'sub') + entropy_residual(burgers_run, k, 'super') + 1e-12
            )

    def test_solver_output_satisfies_inequality(self, burgers_run):
        for k in k_grid(0.5, 1.0, 17):
            assert entropy_residual(burgers_run, float(k)) <= 1e-7

    def test_level_outside_range(self, burgers_run):
        with pytest.raises(InvalidArgumentError):
            entropy_residual(burgers_run, 1.5)

    def test_k_grid(self):
        grid = k_grid(0.37, 1.0, 5)
        np.testing.assert_allclose(grid, [0.0, 0.25, 0.37, 0.5, 0.75, 1.0])
        # 0.5 is already a grid point, 0.37 is not
        assert len(k_grid(0.5, 1.0, 33)) == 33
        assert len(k_grid(0.37, 1.0, 33)) == 34
        with pytest.raises(InvalidArgumentError):
            k_grid(0.5, 1.0, 1)


# ═══════════════════════════════════════════════════════════════════
# A-priori functionals
# ═══════════════════════════════════════════════════════════════════


class TestFunctionals:
    """Weak BV, L2(H1), gradients and mass"""

    def test_weak_bv_worked_value(self, two_cells):
        """u = (0.8, 0.2), dt = 1: 0.09 + 0.09"""
        traj = _trajectory(two_cells, preset('burgers_degenerate'), 1.0,
                           [[0.8, 0.2], [0.8, 0.2]])
        assert weak_bv_functional(traj) == pytest.approx(0.18, abs=1e-12)
        assert weak_bv_scaled(traj) == pytest.approx(0.18 * np.sqrt(0.5), abs=1e-12)

    def test_weak_bv_of_flat_states(self, two_cells):
        traj = _trajectory(two_cells, preset('burgers_degenerate'), 1.0, [[0.4, 0.4]] * 3)
        assert weak_bv_functional(traj) == 0.0

    def test_l2h1_two_cells(self, two_cells):
        """tau = 2, jump 1, dt = 1"""
        traj = _trajectory(two_cells, preset('heat'), 1.0, [[0.5, 0.5], [1.0, 0.0]])
        assert l2h1_functional(traj) == pytest.approx(2.0)
        assert gradient_l2_norm_sq(traj) == pytest.approx(2.0)

    def test_gradient_norm_is_twice_l2h1_in_2d(self):
        problem = preset('heat', dimension=2)
        mesh = build_rect_mesh(1.0, 1.0, 3, 4)
        rng = np.random.default_rng(6)
        traj = _trajectory(mesh, problem, 0.2, rng.uniform(0.0, 1.0, (3, mesh.n_cells)))
        assert gradient_l2_norm_sq(traj) == pytest.approx(2.0 * l2h1_functional(traj))

    def test_mass_of_resting_state(self, resting_burgers):
        assert mass_drift(resting_burgers) == 0.0
        assert mass_drift_bound(resting_burgers) > 0.0

    def test_solver_mass_within_bound(self, burgers_run):
        assert mass_drift(burgers_run) <= mass_drift_bound(burgers_run)


class TestTranslates:
    """Exact space/time translate integrals of phi(u)"""

    @pytest.fixture
    def heat_levels(self, two_cells):
        """phi(u) = u; levels 1 and 2 swap the two cells"""
        return _trajectory(two_cells, preset('heat'), 1.0, [[0.5, 0.5], [1.0, 0.0], [0.0, 1.0]])

    def test_space_shift_of_one_cell(self, heat_levels):
        """Omega_eta = (0, 1/2), jump 1 on both levels"""
        assert space_translate_functional(heat_levels, 0.5) == pytest.approx(1.0)

    def test_space_shift_of_half_a_cell(self, heat_levels):
        assert space_translate_functional(heat_levels, 0.25) == pytest.approx(0.5)

    def test_negative_shift_is_symmetric(self, heat_levels):
        assert space_translate_functional(heat_levels, -0.25) == pytest.approx(
            space_translate_functional(heat_levels, 0.25)
        )

    def test_zero_shift(self, heat_levels):
        assert space_translate_functional(heat_levels, 0.0) == 0.0

    def test_shift_longer_than_domain(self, heat_levels):
        with pytest.raises(InvalidArgumentError):
            space_translate_functional(heat_levels, 1.5)

    def test_time_shift_of_one_step(self, heat_levels):
        assert time_translate_functional(heat_levels, 1.0) == pytest.approx(1.0)

    def test_time_shift_of_half_a_step(self, heat_levels):
        assert time_translate_functional(heat_levels, 0.5) == pytest.approx(0.5)

    def test_time_shift_out_of_range(self, heat_levels):
        with pytest.raises(InvalidArgumentError):
            time_translate_functional(heat_levels, 2.0)
        with pytest.raises(InvalidArgumentError):
            time_translate_functional(heat_levels, 0.0)

    def test_two_dimensional_shift_along_y(self):
        mesh = build_rect_mesh(1.0, 1.0, 2, 2)
        # bottom row 1, top row 0
        traj = _trajectory(mesh, preset('heat', dimension=2), 1.0, [[1, 1, 0, 0]] * 2)
        assert space_translate_functional(traj, [0.0, 0.5]) == pytest.approx(0.5)
        assert space_translate_functional(traj, [0.5, 0.0]) == 0.0


# ═══════════════════════════════════════════════════════════════════
# Continuous entropy functional
# ═══════════════════════════════════════════════════════════════════


class TestContinuousEntropy:
    """Approximate entropy inequality tested against xi = theta zeta"""

    def test_zero_test_function(self, burgers_run):
        zero = TestFunction(TimeWeight('constant', value=0.0), SpaceWeight('constant'), 'zero')
        assert continuous_entropy_functional(burgers_run, 0.3, zero) == 0.0

    def test_resting_state_keeps_initial_and_boundary_terms(self, resting_burgers):
        """k + T |f(k)| summed over both boundary points"""
        one = TestFunction(label='one')
        value = continuous_entropy_functional(resting_burgers, 0.3, one, 'full')
        assert value == pytest.approx(0.3 + 2 * 0.21 * 0.5, abs=1e-12)

    def test_default_test_functions_are_nonnegative(self, burgers_run):
        mesh = burgers_run.mesh
        for test in default_test_functions(burgers_run.final_time, mesh.domain_lower, mesh.domain_upper):
            for k in (0.1, 0.5, 0.9):
                assert np.isfinite(continuous_entropy_functional(burgers_run, k, test))

    def test_negative_time_weight(self, burgers_run):
        bad = TestFunction(TimeWeight('constant', value=-1.0), SpaceWeight('constant'), 'bad')
        with pytest.raises(InvalidTestFunctionError):
            continuous_entropy_functional(burgers_run, 0.3, bad)

    def test_negative_space_weight(self, burgers_run):
        bad = TestFunction(TimeWeight('constant'), SpaceWeight('cosine', value=-1.0), 'bad')
        with pytest.raises(InvalidTestFunctionError):
            continuous_entropy_functional(burgers_run, 0.3, bad)

    def test_unknown_weights(self):
        with pytest.raises(InvalidArgumentError):
            TimeWeight('sawtooth')
        with pytest.raises(InvalidArgumentError):
            SpaceWeight('gaussian', width=0.0)


# ═══════════════════════════════════════════════════════════════════
# Straight-line sums on three cells
# ═══════════════════════════════════════════════════════════════════

DT = 0.1
K_LEVEL = 0.45
LEVELS = [[0.9, 0.6, 0.2], [0.8, 0.55, 0.3], [0.7, 0.6, 0.35]]


def _f(s):
    return s * (1.0 - s)


def _phi(s):
    return max(s - 0.5, 0.0) ** 2


def _godunov(a, b, normal):
    """min of normal * f over [a, b] if a <= b, else max over [b, a]; f peaks at 0.5"""
    candidates = [normal * _f(a), normal * _f(b)]
    if min(a, b) <= 0.5 <= max(a, b):
        candidates.append(normal * _f(0.5))
    return min(candidates) if a <= b else max(candidates)


def _sign(x):
    return 1.0 if x > 0 else (-1.0 if x < 0 else 0.0)


@pytest.fixture
def three_cell_run():
    """burgers_degenerate on three cells, two steps of 0.1, u0 = 0.9"""
    problem = preset('burgers_degenerate', initial=ConstantDatum(0.9))
    mesh = build_interval_mesh(0.0, 1.0, 3)
    return _trajectory(mesh, problem, DT, [np.array(u) for u in LEVELS])


class TestStraightLineSums:
    """Every functional re-summed cell by cell and face by face"""

    h = 1.0 / 3.0
    tau = 3.0

    def test_l2h1(self, three_cell_run):
        expected = 0.0
        for u in LEVELS[1:]:
            for K in range(2):
                expected += DT * self.tau * (_phi(u[K + 1]) - _phi(u[K])) ** 2
        assert l2h1_functional(three_cell_run) == pytest.approx(expected, abs=1e-13)

    def test_weak_bv(self, three_cell_run):
        t = np.linspace(0.0, 1.0, WEAK_BV_GRID)
        expected = 0.0
        for u in LEVELS[1:]:
            for K in range(2):
                a, b = u[K], u[K + 1]
                if a == b:
                    continue
                normal = 1.0 if a > b else -1.0  # from the high cell to the low cell
                lo, hi = min(a, b), max(a, b)
                first = second = -np.inf
                for i in range(WEAK_BV_GRID):
                    for j in range(i, WEAK_BV_GRID):
                        c = lo + (hi - lo) * t[i]
                        d = lo + (hi - lo) * t[j]
                        F_dc = _godunov(d, c, normal)
                        first = max(first, F_dc - _godunov(d, d, normal))
                        second = max(second, F_dc - _godunov(c, c, normal))
                expected += DT * (first + second)
        assert expected > 0.0
        assert weak_bv_functional(three_cell_run) == pytest.approx(expected, abs=1e-13)

    @pytest.mark.parametrize('shift', [0.1, 0.05])
    def test_time_translate(self, three_cell_run, shift):
        """Level 1 meets level 2 on an interval of length shift"""
        jump = sum(self.h * (_phi(LEVELS[2][K]) - _phi(LEVELS[1][K])) ** 2 for K in range(3))
        expected = shift * jump
        assert time_translate_functional(three_cell_run, shift) == pytest.approx(expected, abs=1e-13)

    def test_space_translate(self, three_cell_run):
        """A sixth of every cell lands in the right neighbour"""
        expected = 0.0
        for u in LEVELS[1:]:
            for K in range(2):
                expected += DT * (1.0 / 6.0) * (_phi(u[K + 1]) - _phi(u[K])) ** 2
        value = space_translate_functional(three_cell_run, 1.0 / 6.0)
        assert value == pytest.approx(expected, abs=1e-13)

    def test_entropy_residual(self, three_cell_run):
        k, fk, phi_k = K_LEVEL, _f(K_LEVEL), _phi(K_LEVEL)
        expected = np.zeros((2, 3))
        for n in range(2):
            old, new = LEVELS[n], LEVELS[n + 1]
            for K in range(3):
                expected[n, K] = self.h * (abs(new[K] - k) - abs(old[K] - k)) / DT
            for K in range(2):
                a, b = new[K], new[K + 1]
                Phi = _godunov(max(a, k), max(b, k), 1.0) - _godunov(min(a, k), min(b, k), 1.0)
                D = self.tau * (abs(_phi(b) - phi_k) - abs(_phi(a) - phi_k))
                expected[n, K] += Phi - D
                expected[n, K + 1] -= Phi - D
            expected[n, 0] -= _sign(new[0] - k) * (-fk)
            expected[n, 2] -= _sign(new[2] - k) * fk

        levels = entropy_residual_levels(three_cell_run, k, 'full')
        np.testing.assert_allclose(levels, expected, rtol=0.0, atol=1e-13)
        assert entropy_residual(three_cell_run, k, 'full') == pytest.approx(
            max(0.0, expected.max()), abs=1e-13)

    def test_continuous_entropy(self, three_cell_run):
        k, fk = K_LEVEL, _f(K_LEVEL)
        test = TestFunction(TimeWeight('linear_decay', horizon=1.0), SpaceWeight('cosine'), 'decay_cosine')

        def theta(t):
            return 1.0 - t

        def zeta(x):
            return 1.0 + np.cos(np.pi * x)

        def dzeta(x):
            return -np.pi * np.sin(np.pi * x)

        centers = [1.0 / 6.0, 0.5, 5.0 / 6.0]
        faces = [1.0 / 3.0, 2.0 / 3.0]
        time_term = flux_term = diffusion_term = 0.0
        for n in range(2):
            u = LEVELS[n + 1]
            mid = theta((n + 0.5) * DT)
            for K in range(3):
                time_term += (theta((n + 1) * DT) - theta(n * DT)) * self.h * abs(u[K] - k) * zeta(centers[K])
                flux_term += DT * mid * self.h * _sign(u[K] - k) * (_f(u[K]) - fk) * dzeta(centers[K])
            for K in range(2):
                jump = abs(_phi(u[K + 1]) - _phi(k)) - abs(_phi(u[K]) - _phi(k))
                diffusion_term -= DT * mid * jump * dzeta(faces[K])

        nodes, weights = np.polynomial.legendre.leggauss(4)
        initial_term = 0.0
        for K in range(3):
            for node, weight in zip(nodes, weights):
                x = centers[K] + 0.5 * self.h * node
                initial_term += theta(0.0) * 0.5 * self.h * weight * abs(0.9 - k) * zeta(x)

        boundary_term = (theta(0.5 * DT) + theta(1.5 * DT)) * DT * (fk * zeta(0.0) + fk * zeta(1.0))

        expected = time_term + flux_term + diffusion_term + initial_term + boundary_term
        value = continuous_entropy_functional(three_cell_run, k, test, 'full')
        assert value == pytest.approx(expected, abs=1e-13)


# ═══════════════════════════════════════════════════════════════════
# Relabeling
# ═══════════════════════════════════════════════════════════════════

def _relabeled(mesh, order):
    """Same mesh with new cell i = old cell order[i]; faces keep their orientation"""
    inverse = np.empty_like(order)
    inverse[order] = np.arange(order.size)
    right = np.where(mesh.face_right >= 0, inverse[np.maximum(mesh.face_right, 0)], -1)
    return dataclasses.replace(
        mesh,
        cell_centers=mesh.cell_centers[order],
        cell_measures=mesh.cell_measures[order],
        cell_diameters=mesh.cell_diameters[order],
        cell_lower=mesh.cell_lower[order],
        cell_upper=mesh.cell_upper[order],
        face_left=inverse[mesh.face_left],
        face_right=right,
    )


class TestRelabeling:
    """weak BV and L2(H1) on a permuted 3 x 2 rectangle"""

    @pytest.fixture
    def pair(self):
        rng = np.random.default_rng(11)
        problem = preset('burgers_degenerate', dimension=2)
        mesh = build_rect_mesh(1.0, 1.0, 3, 2)
        levels = [rng.uniform(0.0, 1.0, mesh.n_cells) for _ in range(3)]
        order = np.array([4, 0, 5, 2, 1, 3])
        permuted = _relabeled(mesh, order)
        return (_trajectory(mesh, problem, 0.1, levels),
                _trajectory(permuted, problem, 0.1, [u[order] for u in levels]))

    def test_relabeled_mesh_is_a_different_numbering(self, pair):
        original, permuted = pair
        assert not np.array_equal(original.mesh.interior_left, permuted.mesh.interior_left)
        np.testing.assert_allclose(np.sort(permuted.mesh.cell_measures), np.sort(original.mesh.cell_measures))

    def test_weak_bv_is_invariant(self, pair):
        original, permuted = pair
        assert weak_bv_functional(original) > 0.0
        assert weak_bv_functional(permuted) == pytest.approx(weak_bv_functional(original), rel=1e-12)

    def test_l2h1_is_invariant(self, pair):
        original, permuted = pair
        assert l2h1_functional(original) > 0.0
        assert l2h1_functional(permuted) == pytest.approx(l2h1_functional(original), rel=1e-12)


# ═══════════════════════════════════════════════════════════════════
# Report
# ═══════════════════════════════════════════════════════════════════


class TestComputeDiagnostics:
    """DiagnosticsReport assembly"""

    def test_default_report(self, burgers_run):
        report = compute_diagnostics(burgers_run)
        assert report.all_finite()
        assert report.linf_within_box
        assert report.mass_within_bound
        assert report.entropy_worst_violation <= 1e-7
        assert set(report.entropy_worst_by_kind) == {'sub', 'super', 'full'}
        assert 0.5 in report.k_grid
        assert len(report.continuous_entropy_values) == 9
        assert [tau for tau, _ in report.translate_time] == pytest.approx([0.05, 0.1, 0.2])
        assert len(report.mass_series) == burgers_run.n_levels
        assert report.weak_bv_scaled == pytest.approx(report.weak_bv_value * np.sqrt(0.05))

    def test_options_switch_parts_off(self, burgers_run):
        options = DiagnosticsOptions(weak_bv=False, translates=False, continuous_entropy=False,
                                     entropy_kinds=('full',))
        report = compute_diagnostics(burgers_run, options)
        assert report.weak_bv_value == 0.0
        assert report.translate_space == []
        assert report.continuous_entropy_values == []
        assert list(report.entropy_worst_by_kind) == ['full']

    def test_long_offsets_are_skipped(self, burgers_run):
        options = DiagnosticsOptions(space_offsets=(1.0, 100.0), time_offsets=(1.0, 100.0),
                                     continuous_entropy=False)
        report = compute_diagnostics(burgers_run, options)
        assert len(report.translate_space) == 1
        assert len(report.translate_time) == 1

    def test_serializes(self, burgers_run):
        data = compute_diagnostics(burgers_run, DiagnosticsOptions(continuous_entropy=False)).to_dict()
        assert isinstance(data['translate_space'][0], list)
        assert {'linf_min', 'mass_drift', 'entropy_worst_violation', 'weak_bv_value'} <= set(data)
