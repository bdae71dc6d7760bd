"""
Admissible finite-volume meshes on intervals and rectangles.

Features:
- Tensor-product meshes (graded intervals, uniform rectangles) whose
  center-to-center segments are orthogonal to the shared faces
- Per-face geometry: measure, unit normal, center, distances d_KL, d_Ksigma
- Transmissibilities, diamond measures, discrete gradients
- Discrete H1 product/seminorm with the double-counted edge sum
- Admissibility report (regularity constant, orthogonality, cell-count bound)

Usage:
    from zeroflux.mesh import build_interval_mesh, transmissibility

    mesh = build_interval_mesh(0.0, 1.0, 4, 1.0)
    tau = transmissibility(mesh, 0)      # 4.0
    report = check_admissibility(mesh)   # alpha_best 0.5

Face layout: interior faces come first (ids 0 .. n_interior-1), oriented
from `face_left` to `face_right`; boundary faces follow, owned by
`face_left`, with `face_right == -1` and an outward normal.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from zeroflux.utils.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

ORTHOGONALITY_TOL = 1e-12

ArrayLike = Union[np.ndarray, Sequence[float]]


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Mesh:
    """Immutable admissible mesh; every array is read-only."""
    dimension: int
    edges: Tuple[np.ndarray, ...]  # node coordinates per axis
    cell_centers: np.ndarray  # (n_cells, dim)
    cell_measures: np.ndarray  # (n_cells,)
    cell_diameters: np.ndarray  # (n_cells,)
    cell_lower: np.ndarray  # (n_cells, dim) box corner
    cell_upper: np.ndarray  # (n_cells, dim) box corner
    face_left: np.ndarray  # (n_faces,) owning cell K
    face_right: np.ndarray  # (n_faces,) neighbour L, -1 on the boundary
    face_measures: np.ndarray  # (n_faces,)
    face_normals: np.ndarray  # (n_faces, dim), K -> L or outward
    face_centers: np.ndarray  # (n_faces, dim)
    face_d_left: np.ndarray  # d_{K,sigma}
    face_d_right: np.ndarray  # d_{L,sigma}, 0 on the boundary
    n_interior: int

    def __post_init__(self):
        for name in (
            'cell_centers', 'cell_measures', 'cell_diameters', 'cell_lower',
            'cell_upper', 'face_left', 'face_right', 'face_measures',
            'face_normals', 'face_centers', 'face_d_left', 'face_d_right',
        ):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        object.__setattr__(self, 'edges', tuple(_frozen(e) for e in self.edges))

    # ───────────────────────────────────────────────────────────────
    # Sizes
    # ───────────────────────────────────────────────────────────────

    @property
    def n_cells(self) -> int:
        return int(self.cell_measures.shape[0])

    @property
    def n_faces(self) -> int:
        return int(self.face_measures.shape[0])

    @property
    def n_boundary(self) -> int:
        return self.n_faces - self.n_interior

    @property
    def shape(self) -> Tuple[int, ...]:
        """Cells per axis; cell id = i + nx * j."""
        return tuple(len(e) - 1 for e in self.edges)

    @cached_property
    def h(self) -> float:
        """Mesh size: the largest cell diameter."""
        return float(self.cell_diameters.max())

    @cached_property
    def domain_lower(self) -> np.ndarray:
        return np.array([e[0] for e in self.edges])

    @cached_property
    def domain_upper(self) -> np.ndarray:
        return np.array([e[-1] for e in self.edges])

    @cached_property
    def domain_measure(self) -> float:
        return float(np.prod(self.domain_upper - self.domain_lower))

    @cached_property
    def domain_diameter(self) -> float:
        return float(np.linalg.norm(self.domain_upper - self.domain_lower))

    # ───────────────────────────────────────────────────────────────
    # Interior-face views used by the vectorized kernels
    # ───────────────────────────────────────────────────────────────

    @cached_property
    def d_kl(self) -> np.ndarray:
        """Center distances d_{K,L} of the interior faces."""
        return _frozen(
            self.face_d_left[: self.n_interior] + self.face_d_right[: self.n_interior]
        )

    @cached_property
    def interior_left(self) -> np.ndarray:
        return self.face_left[: self.n_interior]

    @cached_property
    def interior_right(self) -> np.ndarray:
        return self.face_right[: self.n_interior]

    @cached_property
    def cell_boundary_measures(self) -> np.ndarray:
        """m(dK): total measure of each cell's faces."""
        total = np.zeros(self.n_cells)
        np.add.at(total, self.face_left, self.face_measures)
        interior = slice(0, self.n_interior)
        np.add.at(total, self.face_right[interior], self.face_measures[interior])
        return _frozen(total)

    @cached_property
    def _adjacency(self) -> Tuple[List[List[int]], List[List[int]]]:
        interior: List[List[int]] = [[] for _ in range(self.n_cells)]
        boundary: List[List[int]] = [[] for _ in range(self.n_cells)]
        for face in range(self.n_faces):
            left = int(self.face_left[face])
            if face < self.n_interior:
                interior[left].append(face)
                interior[int(self.face_right[face])].append(face)
            else:
                boundary[left].append(face)
        return interior, boundary

    def is_interior(self, face: int) -> bool:
        return 0 <= face < self.n_interior

    def cell_faces(self, cell: int) -> List[int]:
        """Interior faces of a cell (epsilon_K)."""
        return list(self._adjacency[0][cell])

    def cell_boundary_faces(self, cell: int) -> List[int]:
        """Boundary faces of a cell (epsilon_K^ext)."""
        return list(self._adjacency[1][cell])

    def neighbours(self, cell: int) -> List[int]:
        return [self.other_cell(face, cell) for face in self.cell_faces(cell)]

    def other_cell(self, face: int, cell: int) -> int:
        left, right = int(self.face_left[face]), int(self.face_right[face])
        if cell == left:
            return right
        if cell == right:
            return left
        raise InvalidArgumentError(f"cell {cell} does not own face {face}")

    def normal_from(self, face: int, cell: int) -> np.ndarray:
        """Unit normal n_{K,sigma} pointing out of `cell`."""
        if cell == int(self.face_left[face]):
            return self.face_normals[face].copy()
        if face < self.n_interior and cell == int(self.face_right[face]):
            return -self.face_normals[face]
        raise InvalidArgumentError(f"cell {cell} does not own face {face}")

    def locate(self, points: np.ndarray) -> np.ndarray:
        """Cell id containing each point (points on shared faces go right/up)."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        index = np.zeros(points.shape[0], dtype=np.int64)
        stride = 1
        for axis, nodes in enumerate(self.edges):
            n_axis = len(nodes) - 1
            i = np.searchsorted(nodes, points[:, axis], side='right') - 1
            index += np.clip(i, 0, n_axis - 1) * stride
            stride *= n_axis
        return index


@dataclass(frozen=True, eq=False)
class CellField:
    """One value per cell at time level `level` (physical time `time`)."""
    mesh: Mesh
    values: np.ndarray
    level: int = 0
    time: float = 0.0

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if values.shape[0] != self.mesh.n_cells:
            raise InvalidArgumentError(
                f"field has {values.shape[0]} values for {self.mesh.n_cells} cells"
            )
        if not np.all(np.isfinite(values)):
            raise InvalidArgumentError("field values must be finite")
        object.__setattr__(self, 'values', _frozen(values))

    def __len__(self) -> int:
        return self.values.shape[0]

    def __getitem__(self, cell: int) -> float:
        return float(self.values[cell])

    def with_values(self, values: ArrayLike, level: Optional[int] = None,
                    time: Optional[float] = None) -> 'CellField':
        return CellField(
            self.mesh, values,
            self.level if level is None else level,
            self.time if time is None else time,
        )


@dataclass
class AdmissibilityReport:
    """Outcome of check_admissibility."""
    alpha_best: float
    orthogonality_max_angle_error: float
    closure_max_error: float
    distance_max_error: float
    cell_count: int
    cell_count_bound: float
    cell_count_bound_holds: bool
    passed: bool
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'alpha_best': self.alpha_best,
            'orthogonality_max_angle_error': self.orthogonality_max_angle_error,
            'closure_max_error': self.closure_max_error,
            'distance_max_error': self.distance_max_error,
            'cell_count': self.cell_count,
            'cell_count_bound': self.cell_count_bound,
            'cell_count_bound_holds': self.cell_count_bound_holds,
            'pass': self.passed,
            'notes': list(self.notes),
        }


# ═══════════════════════════════════════════════════════════════════
# Builders
# ═══════════════════════════════════════════════════════════════════

def graded_nodes(a: float, b: float, n: int, grading: float) -> np.ndarray:
    """Nodes of (a, b) split into n cells whose widths grow by `grading`."""
    if n < 1:
        raise InvalidArgumentError(f"cell count must be >= 1, got {n}")
    if not a < b:
        raise InvalidArgumentError(f"interval requires a < b, got ({a}, {b})")
    if not grading >= 1.0:
        raise InvalidArgumentError(f"grading must be >= 1, got {grading}")
    if grading == 1.0:
        widths = np.full(n, (b - a) / n)
    else:
        first = (b - a) * (grading - 1.0) / (grading ** n - 1.0)
        widths = first * grading ** np.arange(n)
    nodes = np.concatenate([[a], a + np.cumsum(widths)])
    nodes[-1] = b
    return nodes


def build_tensor_mesh(edges: Sequence[ArrayLike]) -> Mesh:
    """Build a Cartesian mesh from strictly increasing node arrays (1 or 2 axes)."""
    edges = tuple(np.asarray(e, dtype=float) for e in edges)
    dim = len(edges)
    if dim not in (1, 2):
        raise InvalidArgumentError(f"only 1D and 2D meshes are supported, got {dim}D")
    for nodes in edges:
        if nodes.ndim != 1 or nodes.size < 2 or np.any(np.diff(nodes) <= 0):
            raise InvalidArgumentError("mesh nodes must be strictly increasing")

    counts = [len(e) - 1 for e in edges]
    widths = [np.diff(e) for e in edges]
    mids = [0.5 * (e[:-1] + e[1:]) for e in edges]

    # cell id = i + nx * j
    grids = np.meshgrid(*[np.arange(c) for c in counts], indexing='ij')
    flat = [g.ravel(order='F') for g in grids]
    cell_centers = np.stack([mids[ax][flat[ax]] for ax in range(dim)], axis=1)
    cell_widths = np.stack([widths[ax][flat[ax]] for ax in range(dim)], axis=1)
    cell_lower = np.stack([edges[ax][flat[ax]] for ax in range(dim)], axis=1)
    cell_upper = cell_lower + cell_widths
    cell_measures = np.prod(cell_widths, axis=1)
    cell_diameters = np.linalg.norm(cell_widths, axis=1)

    strides = [1, counts[0]]

    def cell_id(index: List[np.ndarray]) -> np.ndarray:
        return sum(index[ax] * strides[ax] for ax in range(dim))

    def face_block(axis: int, node_slice: np.ndarray, interior: bool, outward: float):
        """Faces normal to `axis` through the nodes in node_slice."""
        other = [ax for ax in range(dim) if ax != axis]
        other_ranges = [np.arange(counts[ax]) for ax in other]
        mesh_ix = np.meshgrid(node_slice, *other_ranges, indexing='ij')
        node_ix = mesh_ix[0].ravel(order='F')
        other_ix = [m.ravel(order='F') for m in mesh_ix[1:]]
        n = node_ix.size

        lower_index = [None] * dim
        upper_index = [None] * dim
        for pos, ax in enumerate(other):
            lower_index[ax] = other_ix[pos]
            upper_index[ax] = other_ix[pos]
        lower_index[axis] = node_ix - 1  # cell below the node
        upper_index[axis] = node_ix  # cell above the node

        normal = np.zeros((n, dim))
        center = np.zeros((n, dim))
        center[:, axis] = edges[axis][node_ix]
        measure = np.ones(n)
        for pos, ax in enumerate(other):
            center[:, ax] = mids[ax][other_ix[pos]]
            measure = measure * widths[ax][other_ix[pos]]

        if interior:
            left = cell_id(lower_index)
            right = cell_id(upper_index)
            normal[:, axis] = 1.0
            d_left = center[:, axis] - mids[axis][node_ix - 1]
            d_right = mids[axis][node_ix] - center[:, axis]
        elif outward < 0:
            left = cell_id(upper_index)
            right = np.full(n, -1)
            normal[:, axis] = -1.0
            d_left = mids[axis][node_ix] - center[:, axis]
            d_right = np.zeros(n)
        else:
            left = cell_id(lower_index)
            right = np.full(n, -1)
            normal[:, axis] = 1.0
            d_left = center[:, axis] - mids[axis][node_ix - 1]
            d_right = np.zeros(n)
        return left, right, measure, normal, center, d_left, d_right

    blocks = []
    for axis in range(dim):
        blocks.append(face_block(axis, np.arange(1, counts[axis]), True, 0.0))
    n_interior = sum(b[0].size for b in blocks)
    for axis in range(dim):
        blocks.append(face_block(axis, np.array([0]), False, -1.0))
        blocks.append(face_block(axis, np.array([counts[axis]]), False, 1.0))

    parts = list(zip(*blocks))
    mesh = Mesh(
        dimension=dim,
        edges=edges,
        cell_centers=cell_centers,
        cell_measures=cell_measures,
        cell_diameters=cell_diameters,
        cell_lower=cell_lower,
        cell_upper=cell_upper,
        face_left=np.concatenate(parts[0]).astype(np.int64),
        face_right=np.concatenate(parts[1]).astype(np.int64),
        face_measures=np.concatenate(parts[2]),
        face_normals=np.concatenate(parts[3]),
        face_centers=np.concatenate(parts[4]),
        face_d_left=np.concatenate(parts[5]),
        face_d_right=np.concatenate(parts[6]),
        n_interior=int(n_interior),
    )
    logger.debug(
        f"Built {dim}D mesh: {mesh.n_cells} cells, {mesh.n_interior} interior "
        f"and {mesh.n_boundary} boundary faces, h={mesh.h:.3e}"
    )
    return mesh


def build_interval_mesh(a: float, b: float, n: int, grading: float = 1.0) -> Mesh:
    """1D mesh of (a, b); widths form a geometric progression of ratio `grading`."""
    return build_tensor_mesh([graded_nodes(a, b, n, grading)])


def build_rect_mesh(lx: float, ly: float, nx: int, ny: int) -> Mesh:
    """Uniform nx-by-ny Cartesian mesh of (0, lx) x (0, ly)."""
    if nx < 1 or ny < 1:
        raise InvalidArgumentError(f"cell counts must be >= 1, got ({nx}, {ny})")
    if not (lx > 0 and ly > 0):
        raise InvalidArgumentError(f"side lengths must be positive, got ({lx}, {ly})")
    return build_tensor_mesh([
        graded_nodes(0.0, lx, nx, 1.0),
        graded_nodes(0.0, ly, ny, 1.0),
    ])


# ═══════════════════════════════════════════════════════════════════
# Face quantities
# ═══════════════════════════════════════════════════════════════════

def _require_interior(mesh: Mesh, face: int) -> None:
    if not 0 <= face < mesh.n_faces:
        raise InvalidArgumentError(f"face {face} does not exist")
    if not mesh.is_interior(face):
        raise InvalidArgumentError(
            f"face {face} is a boundary face; zero-flux faces carry no such term"
        )


def _values(mesh: Mesh, field_or_values: Union[CellField, ArrayLike]) -> np.ndarray:
    if isinstance(field_or_values, CellField):
        return field_or_values.values
    values = np.asarray(field_or_values, dtype=float).reshape(-1)
    if values.shape[0] != mesh.n_cells:
        raise InvalidArgumentError(
            f"field has {values.shape[0]} values for {mesh.n_cells} cells"
        )
    return values


def transmissibilities(mesh: Mesh) -> np.ndarray:
    """tau = m(sigma) / d_KL for every interior face."""
    return mesh.face_measures[: mesh.n_interior] / mesh.d_kl


def transmissibility(mesh: Mesh, face: int) -> float:
    _require_interior(mesh, face)
    return float(mesh.face_measures[face] / mesh.d_kl[face])


def diamond_measures(mesh: Mesh) -> np.ndarray:
    return mesh.d_kl * mesh.face_measures[: mesh.n_interior] / mesh.dimension


def diamond_measure(mesh: Mesh, face: int) -> float:
    """m(D_sigma) = d_KL m(sigma) / dim."""
    _require_interior(mesh, face)
    return float(diamond_measures(mesh)[face])


def gradient_field(mesh: Mesh, field_or_values: Union[CellField, ArrayLike]) -> np.ndarray:
    """Diamond-constant gradients dim (w_L - w_K) / d_KL n_KL, shape (n_interior, dim)."""
    w = _values(mesh, field_or_values)
    jump = w[mesh.interior_right] - w[mesh.interior_left]
    scale = mesh.dimension * jump / mesh.d_kl
    return scale[:, None] * mesh.face_normals[: mesh.n_interior]


def discrete_gradient(mesh: Mesh, field_or_values: Union[CellField, ArrayLike],
                      face: int) -> np.ndarray:
    _require_interior(mesh, face)
    w = _values(mesh, field_or_values)
    left, right = int(mesh.face_left[face]), int(mesh.face_right[face])
    return mesh.dimension * (w[right] - w[left]) / mesh.d_kl[face] * mesh.face_normals[face]


def h1_product(mesh: Mesh, v: Union[CellField, ArrayLike],
               w: Union[CellField, ArrayLike]) -> float:
    """dim * sum_K sum_{L in N(K)} tau (v_L - v_K)(w_L - w_K); each face counted twice."""
    v = _values(mesh, v)
    w = _values(mesh, w)
    left, right = mesh.interior_left, mesh.interior_right
    dv = v[right] - v[left]
    dw = w[right] - w[left]
    return float(2.0 * mesh.dimension * np.sum(transmissibilities(mesh) * dv * dw))


def h1_seminorm_sq(mesh: Mesh, field_or_values: Union[CellField, ArrayLike]) -> float:
    return h1_product(mesh, field_or_values, field_or_values)


def discrete_l2_norm_sq(mesh: Mesh, field_or_values: Union[CellField, ArrayLike]) -> float:
    w = _values(mesh, field_or_values)
    return float(np.sum(mesh.cell_measures * w * w))


def geometric_identity_residual(mesh: Mesh, cell: int, vector: ArrayLike) -> float:
    """|m(K) V - sum_sigma m(sigma) (V . n_K,sigma)(x_sigma - x_K)| over all faces of K."""
    v = np.asarray(vector, dtype=float).reshape(-1)
    if v.shape[0] != mesh.dimension:
        raise InvalidArgumentError(f"vector must have {mesh.dimension} components")
    if not np.all(np.isfinite(v)):
        raise InvalidArgumentError("vector must be finite")
    total = mesh.cell_measures[cell] * v
    center = mesh.cell_centers[cell]
    for face in mesh.cell_faces(cell) + mesh.cell_boundary_faces(cell):
        normal = mesh.normal_from(face, cell)
        total = total - mesh.face_measures[face] * float(v @ normal) * (
            mesh.face_centers[face] - center
        )
    return float(np.linalg.norm(total))


# ═══════════════════════════════════════════════════════════════════
# Quadrature and point lookup
# ═══════════════════════════════════════════════════════════════════

def _tensor_rule(mesh: Mesh, ref: np.ndarray, w: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    point_grids = np.meshgrid(*([ref] * mesh.dimension), indexing='ij')
    weight_grids = np.meshgrid(*([w] * mesh.dimension), indexing='ij')
    ref_points = np.stack([g.ravel() for g in point_grids], axis=1)
    ref_weights = np.prod(np.stack([g.ravel() for g in weight_grids], axis=1), axis=1)
    widths = mesh.cell_upper - mesh.cell_lower
    points = mesh.cell_lower[:, None, :] + ref_points[None, :, :] * widths[:, None, :]
    return points, mesh.cell_measures[:, None] * ref_weights[None, :]


def cell_quadrature(mesh: Mesh, order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre points (cells, q, dim) and weights (cells, q) on every box cell."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return _tensor_rule(mesh, 0.5 * (nodes + 1.0), 0.5 * weights)


def cell_sample_points(mesh: Mesh, counts: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Midpoint sub-cell samples, counts[axis] per axis: points (cells, q, dim)
    and equal weights (cells, q) summing to m(K).
    """
    grids = [(np.arange(counts[axis]) + 0.5) / counts[axis] for axis in range(mesh.dimension)]
    mesh_grids = np.meshgrid(*grids, indexing='ij')
    ref_points = np.stack([g.ravel() for g in mesh_grids], axis=1)
    widths = mesh.cell_upper - mesh.cell_lower
    points = mesh.cell_lower[:, None, :] + ref_points[None, :, :] * widths[:, None, :]
    q = ref_points.shape[0]
    return points, np.repeat(mesh.cell_measures[:, None] / q, q, axis=1)


def _side_faces(mesh: Mesh) -> np.ndarray:
    """(cells, 2 dim) face ids; column 2 axis + 1 is the +e_axis side, 2 axis the -e_axis side."""
    table = np.full((mesh.n_cells, 2 * mesh.dimension), -1, dtype=np.int64)
    axes = np.argmax(np.abs(mesh.face_normals), axis=1)
    positive = mesh.face_normals[np.arange(mesh.n_faces), axes] > 0
    nf = mesh.n_interior
    faces = np.arange(mesh.n_faces)
    table[mesh.face_left, 2 * axes + positive.astype(np.int64)] = faces
    table[mesh.face_right[:nf], 2 * axes[:nf]] = faces[:nf]
    return table


def diamond_faces(mesh: Mesh, points: ArrayLike) -> np.ndarray:
    """
    Face whose diamond D_sigma contains each point; a point in the half of
    a cell facing a boundary face gets that boundary face's id.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    cells = mesh.locate(points)
    half = 0.5 * (mesh.cell_upper[cells] - mesh.cell_lower[cells])
    r = (points - mesh.cell_centers[cells]) / half
    axis = np.argmax(np.abs(r), axis=1)
    side = (r[np.arange(points.shape[0]), axis] > 0).astype(np.int64)
    return _side_faces(mesh)[cells, 2 * axis + side]


def gradient_at(mesh: Mesh, gradients: np.ndarray, points: ArrayLike) -> np.ndarray:
    """Evaluate a diamond-constant gradient field at points; zero on boundary diamonds."""
    faces = diamond_faces(mesh, points)
    out = np.zeros((faces.shape[0], mesh.dimension))
    interior = faces < mesh.n_interior
    out[interior] = gradients[faces[interior]]
    return out


# ═══════════════════════════════════════════════════════════════════
# Admissibility
# ═══════════════════════════════════════════════════════════════════

def alpha_best(mesh: Mesh) -> float:
    """Largest alpha with alpha h^l <= m(K) and m(dK) <= h^(l-1) / alpha for all K."""
    dim, h = mesh.dimension, mesh.h
    volume_ratio = mesh.cell_measures / h ** dim
    surface_ratio = h ** (dim - 1) / mesh.cell_boundary_measures
    return float(np.min(np.minimum(volume_ratio, surface_ratio)))


def cell_count_bound(mesh: Mesh, alpha: Optional[float] = None) -> float:
    alpha = alpha_best(mesh) if alpha is None else alpha
    return mesh.domain_measure / alpha * mesh.h ** (-mesh.dimension)


def check_admissibility(mesh: Mesh) -> AdmissibilityReport:
    alpha = alpha_best(mesh)
    n = mesh.n_interior

    # Orthogonality: |sin| of the angle between x_K x_L and the face normal
    segment = mesh.cell_centers[mesh.interior_right] - mesh.cell_centers[mesh.interior_left]
    length = np.linalg.norm(segment, axis=1)
    if n:
        unit = segment / length[:, None]
        along = np.sum(unit * mesh.face_normals[:n], axis=1)
        across = np.linalg.norm(unit - along[:, None] * mesh.face_normals[:n], axis=1)
        orthogonality = float(np.max(across))
        distance_error = float(np.max(np.abs(length - mesh.d_kl)))
        if np.any(along <= 0):
            orthogonality = max(orthogonality, 1.0)
    else:
        orthogonality = 0.0
        distance_error = 0.0

    closure = np.zeros((mesh.n_cells, mesh.dimension))
    weighted = mesh.face_measures[:, None] * mesh.face_normals
    np.add.at(closure, mesh.face_left, weighted)
    np.add.at(closure, mesh.interior_right, -weighted[:n])
    closure_error = float(np.max(np.linalg.norm(closure, axis=1)))

    bound = cell_count_bound(mesh, alpha) if alpha > 0 else float('inf')
    notes = []
    if orthogonality > ORTHOGONALITY_TOL:
        notes.append(f"orthogonality error {orthogonality:.3e} exceeds tolerance")
    if alpha <= 0:
        notes.append("regularity constant is not positive")

    return AdmissibilityReport(
        alpha_best=alpha,
        orthogonality_max_angle_error=orthogonality,
        closure_max_error=closure_error,
        distance_max_error=distance_error,
        cell_count=mesh.n_cells,
        cell_count_bound=bound,
        cell_count_bound_holds=bool(mesh.n_cells <= bound * (1 + 1e-12)),
        passed=bool(alpha > 0 and orthogonality <= ORTHOGONALITY_TOL),
        notes=notes,
    )
