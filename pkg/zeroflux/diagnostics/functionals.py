"""
A-priori functionals of a trajectory: L-infinity bounds, mass, weak BV,
L2(H1) of phi(u) and the space/time translate functionals.

All functionals integrate the piecewise-constant reconstruction
u(t, x) = u_K^{n+1} on (n dt, (n+1) dt] x K, so levels 1..N enter the
space-time sums and level 0 only enters through u^0 itself.
"""

import logging
from typing import List, Sequence, Tuple, Union

import numpy as np

from zeroflux.mesh.mesh import diamond_measures, gradient_field, transmissibilities
from zeroflux.solver.march import Trajectory
from zeroflux.solver.residual import residual_scale
from zeroflux.utils.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

WEAK_BV_GRID = 64


def linf_bounds(traj: Trajectory) -> Tuple[float, float]:
    values = traj.values
    return float(values.min()), float(values.max())


def mass_series(traj: Trajectory) -> List[float]:
    """sum_K m(K) u_K^n for every level n."""
    return [float(m) for m in traj.total_mass()]


def mass_drift(traj: Trajectory) -> float:
    masses = np.asarray(mass_series(traj))
    return float(np.max(np.abs(masses - masses[0])))


def mass_drift_bound(traj: Trajectory) -> float:
    """Telescoping bound steps * dt * n_cells * tol * scale, plus summation round-off."""
    mesh, problem = traj.mesh, traj.problem
    tol = traj.config.newton_tol if traj.config is not None else 1e-10
    scale = residual_scale(mesh, problem, traj.dt)
    solver_part = traj.n_steps * traj.dt * mesh.n_cells * tol * scale
    roundoff = 64 * np.finfo(float).eps * mesh.domain_measure * problem.u_max * (traj.n_steps + 1)
    return float(solver_part + roundoff)


# ═══════════════════════════════════════════════════════════════════
# Weak BV
# ═══════════════════════════════════════════════════════════════════

def _triangle_pairs(points: int) -> Tuple[np.ndarray, np.ndarray]:
    """Index pairs (i, j) with i <= j on a points x points grid."""
    i, j = np.triu_indices(points)
    return i, j


def weak_bv_functional(traj: Trajectory, grid: int = WEAK_BV_GRID) -> float:
    """
    sum_n dt sum_{K|L} [ max (F(d,c) - F(d,d)) + max (F(d,c) - F(c,c)) ]

    with K the cell holding the larger value and the maxima taken over
    u_L <= c <= d <= u_K on a grid x grid triangular grid (endpoints included).
    """
    if traj.n_levels == 0:
        raise InvalidArgumentError("trajectory is empty")
    mesh, scheme = traj.mesh, traj.scheme
    nf = mesh.n_interior
    if nf == 0 or traj.n_steps == 0:
        return 0.0

    t = np.linspace(0.0, 1.0, grid)
    ci, di = _triangle_pairs(grid)
    tc, td = t[ci][None, :], t[di][None, :]
    left, right = mesh.interior_left, mesh.interior_right
    measures = mesh.face_measures[:nf]
    normals = mesh.face_normals[:nf]
    directions, direction_index = np.unique(normals, axis=0, return_inverse=True)
    direction_index = np.asarray(direction_index).reshape(-1)

    total = 0.0
    for level in range(1, traj.n_levels):
        u = traj.fields[level].values
        uL, uR = u[left], u[right]
        left_high = uL >= uR
        hi = np.maximum(uL, uR)
        lo = np.minimum(uL, uR)
        active = hi > lo
        step_sum = 0.0
        for d, normal in enumerate(directions):
            for orientation, sign in ((True, 1.0), (False, -1.0)):
                faces = np.flatnonzero(active & (direction_index == d) & (left_high == orientation))
                if faces.size == 0:
                    continue
                span = (hi[faces] - lo[faces])[:, None]
                c = lo[faces][:, None] + span * tc
                dd = lo[faces][:, None] + span * td
                oriented = sign * normal
                F_dc = scheme.directional_fluxes(dd, c, oriented, check=False)
                F_dd = scheme.directional_fluxes(dd, dd, oriented, check=False)
                F_cc = scheme.directional_fluxes(c, c, oriented, check=False)
                first = np.max(F_dc - F_dd, axis=1)
                second = np.max(F_dc - F_cc, axis=1)
                step_sum += float(np.sum(measures[faces] * (first + second)))
        total += traj.dt * step_sum
    return total


def weak_bv_scaled(traj: Trajectory, value: float = None) -> float:
    """weak BV value times sqrt(h)."""
    value = weak_bv_functional(traj) if value is None else value
    return value * float(np.sqrt(traj.mesh.h))


# ═══════════════════════════════════════════════════════════════════
# L2(H1)
# ═══════════════════════════════════════════════════════════════════

def _phi_levels(traj: Trajectory) -> np.ndarray:
    return traj.problem.phi(traj.values)


def l2h1_functional(traj: Trajectory) -> float:
    """(1/2) sum_n dt sum_K sum_{L in N(K)} tau |phi(u_K) - phi(u_L)|^2."""
    mesh = traj.mesh
    if mesh.n_interior == 0 or traj.n_steps == 0:
        return 0.0
    phi = _phi_levels(traj)[1:]
    jumps = phi[:, mesh.interior_right] - phi[:, mesh.interior_left]
    # the double-counted sum halved is one term per face
    return float(traj.dt * np.sum(transmissibilities(mesh)[None, :] * jumps ** 2))


def gradient_l2_norm_sq(traj: Trajectory) -> float:
    """sum_n dt sum_sigma m(D_sigma) |grad_sigma phi(u)|^2."""
    mesh = traj.mesh
    if mesh.n_interior == 0 or traj.n_steps == 0:
        return 0.0
    weights = diamond_measures(mesh)
    total = 0.0
    for phi in _phi_levels(traj)[1:]:
        grad = gradient_field(mesh, phi)
        total += float(np.sum(weights * np.sum(grad ** 2, axis=1)))
    return traj.dt * total


# ═══════════════════════════════════════════════════════════════════
# Translates
# ═══════════════════════════════════════════════════════════════════

def axis_overlaps(nodes: np.ndarray, shift: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Pairs (p, q, length) with length = |[x_p, x_p+1] cap ([x_q, x_q+1] - shift)| > 0:
    the part of cell p whose points land in cell q after moving by `shift`.
    """
    lo, hi = nodes[:-1], nodes[1:]
    start = np.maximum(lo[:, None], lo[None, :] - shift)
    stop = np.minimum(hi[:, None], hi[None, :] - shift)
    length = stop - start
    p, q = np.nonzero(length > 0)
    return p, q, length[p, q]


def space_translate_functional(traj: Trajectory, shift: Union[float, Sequence[float]]) -> float:
    """int_0^T int_{Omega_eta} |phi(u(t, x + eta)) - phi(u(t, x))|^2 dx dt, exactly."""
    mesh = traj.mesh
    eta = np.atleast_1d(np.asarray(shift, dtype=float))
    if eta.size == 1 and mesh.dimension == 2:
        eta = np.array([eta[0], 0.0])
    if eta.size != mesh.dimension:
        raise InvalidArgumentError(f"shift must have {mesh.dimension} components")
    if not np.linalg.norm(eta) < mesh.domain_diameter:
        raise InvalidArgumentError("shift must be shorter than the domain diameter")
    if traj.n_steps == 0 or not np.any(eta):
        return 0.0

    axis_pairs = [axis_overlaps(mesh.edges[ax], eta[ax]) for ax in range(mesh.dimension)]
    if mesh.dimension == 1:
        source, target, weight = axis_pairs[0]
    else:
        (px, qx, lx), (py, qy, ly) = axis_pairs
        nx = mesh.shape[0]
        source = (px[:, None] + nx * py[None, :]).ravel()
        target = (qx[:, None] + nx * qy[None, :]).ravel()
        weight = (lx[:, None] * ly[None, :]).ravel()

    phi = _phi_levels(traj)[1:]
    diff = phi[:, target] - phi[:, source]
    return float(traj.dt * np.sum(weight[None, :] * diff ** 2))


def time_translate_functional(traj: Trajectory, tau: float) -> float:
    """int_0^{T - tau} int_Omega |phi(u(t + tau, x)) - phi(u(t, x))|^2 dx dt, exactly."""
    T = traj.final_time
    if not 0.0 < tau < T:
        raise InvalidArgumentError(f"time shift must lie in (0, {T}), got {tau}")
    dt, n_steps = traj.dt, traj.n_steps
    end = T - tau

    grid = np.arange(n_steps + 1) * dt
    breaks = np.concatenate([grid, grid - tau, [0.0, end]])
    breaks = np.unique(np.clip(breaks, 0.0, end))
    lengths = np.diff(breaks)
    keep = lengths > 0
    mids = 0.5 * (breaks[:-1] + breaks[1:])[keep]
    lengths = lengths[keep]

    def level(t: np.ndarray) -> np.ndarray:
        return np.minimum(np.floor(t / dt).astype(np.int64) + 1, n_steps)

    phi = _phi_levels(traj)
    diff = phi[level(mids + tau)] - phi[level(mids)]
    per_interval = (diff ** 2) @ traj.mesh.cell_measures
    return float(np.sum(lengths * per_interval))
