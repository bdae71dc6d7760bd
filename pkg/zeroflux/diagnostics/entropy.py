"""
Discrete and continuous entropy certificates.

Entropy pairs per kind, with pk = phi(k):

    sub    eta = (s - k)^+   sign in {0, 1}    eta_phi = (p - pk)^+
    super  eta = (k - s)^+   sign in {-1, 0}   eta_phi = (pk - p)^+
    full   eta = |s - k|     sign in {-1,0,1}  eta_phi = |p - pk|

sign(0) = 0 in every case, and full = sub + super termwise.
"""

import logging
from typing import Tuple

import numpy as np

from zeroflux.diagnostics.testfunctions import TestFunction, require_nonnegative
from zeroflux.mesh.mesh import cell_quadrature, diamond_measures, gradient_field, transmissibilities
from zeroflux.numflux.schemes import EntropyKind
from zeroflux.solver.march import Trajectory
from zeroflux.utils.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

CELL_QUADRATURE_ORDER = 4
FACE_QUADRATURE_ORDER = 3


def entropy_parts(s: np.ndarray, k: float, kind: EntropyKind) -> Tuple[np.ndarray, np.ndarray]:
    """(eta_k(s), sign_k(s)) for the chosen kind."""
    s = np.asarray(s, dtype=float)
    if kind is EntropyKind.SUB:
        return np.maximum(s - k, 0.0), (s > k).astype(float)
    if kind is EntropyKind.SUPER:
        return np.maximum(k - s, 0.0), -(s < k).astype(float)
    return np.abs(s - k), np.sign(s - k)


def _check_level(traj: Trajectory, k: float) -> None:
    if not 0.0 <= k <= traj.problem.u_max:
        raise InvalidArgumentError(f"k must lie in [0, {traj.problem.u_max}], got {k}")


def entropy_residual_levels(traj: Trajectory, k: float, kind='full') -> np.ndarray:
    """
    LHS - RHS of the discrete entropy inequality for every step and cell,
    shape (steps, cells); the inequality holds where the entry is <= 0.
    """
    kind = EntropyKind(kind)
    _check_level(traj, k)
    mesh, problem, scheme = traj.mesh, traj.problem, traj.scheme
    n, nf = mesh.n_cells, mesh.n_interior
    left, right = mesh.interior_left, mesh.interior_right
    tau = transmissibilities(mesh)
    phi_k = float(problem.phi(np.array([k]))[0])

    owners = mesh.face_left[nf:]
    fk = problem.flux.evaluate(np.array([k]))[0]
    boundary_flux = mesh.face_measures[nf:] * (mesh.face_normals[nf:] @ fk)  # m(sigma) f(k) . n

    out = np.zeros((traj.n_steps, n))
    values = traj.values
    for step in range(traj.n_steps):
        u_old, u_new = values[step], values[step + 1]
        eta_new, sign_new = entropy_parts(u_new, k, kind)
        eta_old, _ = entropy_parts(u_old, k, kind)
        E = mesh.cell_measures * (eta_new - eta_old) / traj.dt

        if nf:
            Phi = scheme.entropy_fluxes(u_new[left], u_new[right], k,
                                        mesh.face_measures[:nf], mesh.face_normals[:nf], kind)
            eta_phi, _ = entropy_parts(problem.phi(u_new), phi_k, kind)
            D = tau * (eta_phi[right] - eta_phi[left])
            face_term = Phi - D
            E += np.bincount(left, weights=face_term, minlength=n)
            E -= np.bincount(right, weights=face_term, minlength=n)

        rhs = np.bincount(owners, weights=sign_new[owners] * boundary_flux, minlength=n)
        out[step] = E - rhs
    return out


def entropy_residual(traj: Trajectory, k: float, kind='full') -> float:
    """Largest positive excess of the discrete entropy inequality over cells and steps."""
    if traj.n_steps == 0:
        return 0.0
    excess = entropy_residual_levels(traj, k, kind)
    return float(max(0.0, excess.max()))


# ═══════════════════════════════════════════════════════════════════
# Continuous approximate entropy inequality
# ═══════════════════════════════════════════════════════════════════

def _entropy_flux(traj: Trajectory, u: np.ndarray, k: float, kind: EntropyKind) -> np.ndarray:
    """Continuous entropy flux Phi_k(u), shape u.shape + (dim,)."""
    flux = traj.problem.flux
    fk = flux.evaluate(np.array([k]))[0]
    if kind is EntropyKind.SUB:
        return flux.evaluate(np.maximum(u, k)) - fk
    if kind is EntropyKind.SUPER:
        return fk - flux.evaluate(np.minimum(u, k))
    return np.sign(u - k)[..., None] * (flux.evaluate(u) - fk)


def _boundary_weight(fkn: np.ndarray, kind: EntropyKind) -> np.ndarray:
    if kind is EntropyKind.SUB:
        return np.maximum(fkn, 0.0)
    if kind is EntropyKind.SUPER:
        return np.maximum(-fkn, 0.0)
    return np.abs(fkn)


def _boundary_face_integrals(mesh, zeta, order: int) -> np.ndarray:
    """int_sigma zeta over every boundary face."""
    nf = mesh.n_interior
    centers = mesh.face_centers[nf:]
    measures = mesh.face_measures[nf:]
    if mesh.dimension == 1:
        values = zeta(centers, mesh.domain_lower, mesh.domain_upper)
        require_nonnegative(values, 'zeta on the boundary')
        return measures * values
    nodes, weights = np.polynomial.legendre.leggauss(order)
    normals = mesh.face_normals[nf:]
    tangents = np.stack([-normals[:, 1], normals[:, 0]], axis=1)
    total = np.zeros(centers.shape[0])
    for node, weight in zip(nodes, weights):
        points = centers + 0.5 * node * measures[:, None] * tangents
        values = zeta(points, mesh.domain_lower, mesh.domain_upper)
        require_nonnegative(values, 'zeta on the boundary')
        total += 0.5 * weight * measures * values
    return total


def continuous_entropy_functional(traj: Trajectory, k: float, test: TestFunction,
                                  kind='full') -> float:
    """
    LHS of the continuous approximate entropy inequality for xi = theta zeta:

        int int eta(u) xi_t + (Phi_k(u) - grad_O eta_phi(phi(u))) . grad xi
        + int eta(u0) xi(0) + int int_dOmega w(f(k) . n) xi

    Midpoint rule per cell and slab for the volume terms, xi_t integrated
    exactly per slab, Gauss-Legendre on boundary faces and for the
    initial term.
    """
    kind = EntropyKind(kind)
    _check_level(traj, k)
    mesh, problem = traj.mesh, traj.problem
    lower, upper = mesh.domain_lower, mesh.domain_upper
    nf = mesh.n_interior
    dt, steps = traj.dt, traj.n_steps

    theta_nodes = test.time(np.arange(steps + 1) * dt)
    theta_mid = test.time((np.arange(steps) + 0.5) * dt)
    require_nonnegative(theta_nodes, 'theta')
    require_nonnegative(theta_mid, 'theta')

    zeta_cells = test.space(mesh.cell_centers, lower, upper)
    grad_cells = test.space.gradient(mesh.cell_centers, lower, upper)
    grad_faces = test.space.gradient(mesh.face_centers[:nf], lower, upper)
    require_nonnegative(zeta_cells, 'zeta')
    q_points, q_weights = cell_quadrature(mesh, CELL_QUADRATURE_ORDER)
    zeta_quad = test.space(q_points.reshape(-1, mesh.dimension), lower, upper)
    require_nonnegative(zeta_quad, 'zeta')

    values = traj.values
    phi_k = float(problem.phi(np.array([k]))[0])
    weights_diamond = diamond_measures(mesh)

    time_term = 0.0
    flux_term = 0.0
    diffusion_term = 0.0
    for step in range(steps):
        u = values[step + 1]
        eta, _ = entropy_parts(u, k, kind)
        # xi_t integrates exactly to zeta (theta(t_n+1) - theta(t_n)) on the slab
        time_term += (theta_nodes[step + 1] - theta_nodes[step]) * float(
            np.sum(mesh.cell_measures * eta * zeta_cells)
        )
        Phi = _entropy_flux(traj, u, k, kind)
        flux_term += dt * theta_mid[step] * float(
            np.sum(mesh.cell_measures * np.sum(Phi * grad_cells, axis=1))
        )
        if nf:
            eta_phi, _ = entropy_parts(problem.phi(u), phi_k, kind)
            grad = gradient_field(mesh, eta_phi)
            diffusion_term -= dt * theta_mid[step] * float(
                np.sum(weights_diamond * np.sum(grad * grad_faces, axis=1))
            )

    u0 = problem.initial.evaluate(q_points.reshape(-1, mesh.dimension), lower, upper)
    eta0, _ = entropy_parts(u0, k, kind)
    initial_term = theta_nodes[0] * float(np.sum(q_weights.ravel() * eta0 * zeta_quad))

    fk = problem.flux.evaluate(np.array([k]))[0]
    weight = _boundary_weight(mesh.face_normals[nf:] @ fk, kind)
    boundary_term = float(np.sum(theta_mid) * dt) * float(
        np.sum(weight * _boundary_face_integrals(mesh, test.space, FACE_QUADRATURE_ORDER))
    )

    total = time_term + flux_term + diffusion_term + initial_term + boundary_term
    logger.debug(
        f"Continuous entropy ({kind.value}, k={k}, {test.label}): time={time_term:.3e} "
        f"flux={flux_term:.3e} diffusion={diffusion_term:.3e} initial={initial_term:.3e} "
        f"boundary={boundary_term:.3e}"
    )
    return total
