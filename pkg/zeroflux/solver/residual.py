"""
Residual and Jacobian of the implicit scheme on one time step.

    R_K = m(K)(u_K - u_K^old)/dt + sum_{sigma in eps_K} F_{K,sigma}(u_K, u_L)
          - sum_{sigma = K|L} tau_{K|L} (phi(u_L) - phi(u_K))

Boundary faces contribute nothing (zero flux). Interior contributions are
accumulated once per face, +F on the left cell and -F on the right cell.
"""

from typing import Union

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix

from zeroflux.mesh.mesh import CellField, Mesh, transmissibilities
from zeroflux.numflux.schemes import FluxScheme
from zeroflux.problem.model import Problem
from zeroflux.utils.errors import InvalidArgumentError

FieldLike = Union[CellField, np.ndarray]


def _as_values(values: FieldLike) -> np.ndarray:
    return values.values if isinstance(values, CellField) else np.asarray(values, dtype=float)


def face_balance(mesh: Mesh, problem: Problem, scheme: FluxScheme, u: np.ndarray) -> np.ndarray:
    """sum_sigma F_{K,sigma}(u) - sum_{K|L} tau (phi(u_L) - phi(u_K)) per cell."""
    n, nf = mesh.n_cells, mesh.n_interior
    if nf == 0:
        return np.zeros(n)
    left, right = mesh.interior_left, mesh.interior_right
    F = scheme.fluxes(u[left], u[right], mesh.face_measures[:nf], mesh.face_normals[:nf])
    phi = problem.phi(u)
    face_term = F - transmissibilities(mesh) * (phi[right] - phi[left])
    return (np.bincount(left, weights=face_term, minlength=n)
            - np.bincount(right, weights=face_term, minlength=n))


def residual_values(mesh: Mesh, problem: Problem, scheme: FluxScheme,
                    u_old: np.ndarray, u_new: np.ndarray, dt: float) -> np.ndarray:
    return mesh.cell_measures * (u_new - u_old) / dt + face_balance(mesh, problem, scheme, u_new)


def picard_map(mesh: Mesh, problem: Problem, scheme: FluxScheme,
               u_old: np.ndarray, v: np.ndarray, dt: float) -> np.ndarray:
    """v -> u_old - (dt / m(K)) face_balance(v); its fixed points are the roots of R."""
    return u_old - dt * face_balance(mesh, problem, scheme, v) / mesh.cell_measures


def assemble_residual(mesh: Mesh, problem: Problem, scheme: FluxScheme,
                      u_old: FieldLike, u_new: FieldLike, dt: float) -> CellField:
    if not dt > 0:
        raise InvalidArgumentError(f"time step must be positive, got {dt}")
    old, new = _as_values(u_old), _as_values(u_new)
    level = u_new.level if isinstance(u_new, CellField) else 0
    time = u_new.time if isinstance(u_new, CellField) else 0.0
    return CellField(mesh, residual_values(mesh, problem, scheme, old, new, dt), level, time)


def assemble_jacobian(mesh: Mesh, problem: Problem, scheme: FluxScheme,
                      u_new: np.ndarray, dt: float, phi_floor: float) -> csr_matrix:
    """Generalized Jacobian: right derivative of phi floored at phi_floor."""
    n, nf = mesh.n_cells, mesh.n_interior
    left, right = mesh.interior_left, mesh.interior_right
    cells = np.arange(n)

    if nf == 0:
        return coo_matrix((mesh.cell_measures / dt, (cells, cells)), shape=(n, n)).tocsr()

    Fa, Fb = scheme.partials(u_new[left], u_new[right], mesh.face_measures[:nf], mesh.face_normals[:nf])
    dphi = np.maximum(problem.phi_prime(u_new), phi_floor)
    tau = transmissibilities(mesh)
    Dl = tau * dphi[left]
    Dr = tau * dphi[right]

    rows = np.concatenate([cells, left, left, right, right])
    cols = np.concatenate([cells, left, right, left, right])
    data = np.concatenate([
        mesh.cell_measures / dt,
        Fa + Dl,  # (left, left)
        Fb - Dr,  # (left, right)
        -Fa - Dl,  # (right, left)
        -Fb + Dr,  # (right, right)
    ])
    return coo_matrix((data, (rows, cols)), shape=(n, n)).tocsr()


def residual_scale(mesh: Mesh, problem: Problem, dt: float) -> float:
    """max(1, max_K m(K) u_max / dt): the residual tolerance is relative to this."""
    return max(1.0, float(np.max(mesh.cell_measures)) * problem.u_max / dt)
