"""Triangle meshes of rectangles with circular holes removed."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Tuple

import numpy as np

from ..errors import MeshError, OutsideMeshError, ValidationError
from ..geometry import DomainSpec, Hole

OUTER = -1
MAX_TRIANGLES = 10_000_000
BARY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Mesh:
    """Conforming triangulation with tagged boundary edges.

    ``edge_tags[i]`` is ``OUTER`` (-1) for an edge on the rectangle and ``k``
    for an edge on the polygon approximating ``holes[k]``.  ``grid`` is
    ``(xmin, ymin, dx, dy, nx, ny)`` for structured meshes and enables
    arithmetic point location.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    boundary_edges: np.ndarray
    edge_tags: np.ndarray
    h: float
    holes: Tuple[Hole, ...] = ()
    grid: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "vertices", np.ascontiguousarray(self.vertices, dtype=float))
        object.__setattr__(self, "triangles",
                           np.ascontiguousarray(self.triangles, dtype=np.int64).reshape(-1, 3))
        object.__setattr__(self, "boundary_edges",
                           np.ascontiguousarray(self.boundary_edges, dtype=np.int64).reshape(-1, 2))
        object.__setattr__(self, "edge_tags",
                           np.ascontiguousarray(self.edge_tags, dtype=np.int64).reshape(-1))
        object.__setattr__(self, "holes", tuple(self.holes))
        for a in (self.vertices, self.triangles, self.boundary_edges, self.edge_tags):
            a.flags.writeable = False

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @property
    def n_holes(self) -> int:
        if self.holes:
            return len(self.holes)
        tags = self.edge_tags[self.edge_tags >= 0]
        return int(len(np.unique(tags)))

    @cached_property
    def signed_areas(self) -> np.ndarray:
        p = self.vertices[self.triangles]
        e1 = p[:, 1] - p[:, 0]
        e2 = p[:, 2] - p[:, 0]
        return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])

    @cached_property
    def edges(self) -> np.ndarray:
        """Unique undirected edges, each row sorted, rows sorted."""
        t = self.triangles
        e = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        e.sort(axis=1)
        return np.unique(e, axis=0)

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - len(self.edges) + self.n_triangles

    @cached_property
    def neighbors(self) -> np.ndarray:
        """``neighbors[t, i]`` is the triangle across the edge opposite local
        vertex ``i``, or -1 on the boundary."""
        t = self.triangles
        nt = len(t)
        a = np.concatenate([t[:, 1], t[:, 2], t[:, 0]])
        b = np.concatenate([t[:, 2], t[:, 0], t[:, 1]])
        owner = np.tile(np.arange(nt), 3)
        local = np.repeat(np.arange(3), nt)
        lo = np.minimum(a, b)
        hi = np.maximum(a, b)
        order = np.lexsort((hi, lo))
        lo, hi, owner, local = lo[order], hi[order], owner[order], local[order]
        nb = np.full((nt, 3), -1, dtype=np.int64)
        same = (lo[1:] == lo[:-1]) & (hi[1:] == hi[:-1])
        idx = np.nonzero(same)[0]
        nb[owner[idx], local[idx]] = owner[idx + 1]
        nb[owner[idx + 1], local[idx + 1]] = owner[idx]
        return nb

    def tag_name(self, tag: int) -> str:
        return "outer" if tag == OUTER else f"hole:{int(tag)}"

    def edges_with(self, which) -> np.ndarray:
        """Boolean mask over boundary edges.

        ``which`` is ``"outer"``, ``"holes"``, ``"all"`` or an iterable of
        integer tags.
        """
        tags = self.edge_tags
        if isinstance(which, str):
            if which == "outer":
                return tags == OUTER
            if which == "holes":
                return tags >= 0
            if which == "all":
                return np.ones(len(tags), dtype=bool)
            raise ValidationError(f"unknown boundary filter {which!r}")
        return np.isin(tags, np.fromiter(which, dtype=np.int64))


@dataclass(frozen=True)
class MeshQualityReport:
    min_angle: float
    max_aspect: float
    triangle_count: int
    vertex_count: int
    h_min: float
    h_max: float


def mesh_rectangle(domain: DomainSpec, h: float) -> Mesh:
    """Uniform grid of cells with sides <= h, each split along its
    lower-left to upper-right diagonal."""
    if domain.dimension != 2:
        raise ValidationError("meshing is two-dimensional", key="domain")
    lx = domain.xmax - domain.xmin
    ly = domain.ymax - domain.ymin
    if not (h > 0 and h < min(lx, ly) + 1e-12 * min(lx, ly)):
        raise ValidationError("mesh size must satisfy 0 < h <= shortest side", key="h")
    nx = math.ceil(lx / h - 1e-9)
    ny = math.ceil(ly / h - 1e-9)
    if 2 * nx * ny > MAX_TRIANGLES:
        raise ValidationError(f"h={h} would produce {2 * nx * ny} triangles", key="h")
    xs = domain.xmin + lx * np.arange(nx + 1) / nx
    ys = domain.ymin + ly * np.arange(ny + 1) / ny
    xs[-1] = domain.xmax
    ys[-1] = domain.ymax
    X, Y = np.meshgrid(xs, ys)
    vertices = np.column_stack([X.ravel(), Y.ravel()])

    i, j = np.meshgrid(np.arange(nx), np.arange(ny))
    v00 = (j * (nx + 1) + i).ravel()
    v10 = v00 + 1
    v01 = v00 + nx + 1
    v11 = v01 + 1
    tris = np.empty((2 * nx * ny, 3), dtype=np.int64)
    tris[0::2] = np.column_stack([v00, v10, v11])
    tris[1::2] = np.column_stack([v00, v11, v01])

    # boundary cycle, counterclockwise from (xmin, ymin)
    bottom = np.arange(nx + 1)
    right = nx + (nx + 1) * np.arange(ny + 1)
    top = (nx + 1) * ny + np.arange(nx, -1, -1)
    left = (nx + 1) * np.arange(ny, -1, -1)
    cycle = np.concatenate([bottom, right[1:], top[1:], left[1:]])
    bedges = np.column_stack([cycle[:-1], cycle[1:]])
    return Mesh(vertices, tris, bedges, np.full(len(bedges), OUTER), h=float(h),
                grid=(domain.xmin, domain.ymin, lx / nx, ly / ny, nx, ny))


def triangle_angles(mesh: Mesh) -> np.ndarray:
    """Interior angles in degrees, shape (T, 3), angle i at local vertex i."""
    p = mesh.vertices[mesh.triangles]
    out = np.empty((len(p), 3))
    for i in range(3):
        u = p[:, (i + 1) % 3] - p[:, i]
        v = p[:, (i + 2) % 3] - p[:, i]
        cross = u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]
        dot = u[:, 0] * v[:, 0] + u[:, 1] * v[:, 1]
        out[:, i] = np.degrees(np.arctan2(np.abs(cross), dot))
    return out


def quality_report(mesh: Mesh) -> MeshQualityReport:
    p = mesh.vertices[mesh.triangles]
    lengths = np.stack([np.hypot(*(p[:, (i + 2) % 3] - p[:, (i + 1) % 3]).T)
                        for i in range(3)], axis=1)
    area = np.abs(mesh.signed_areas)
    circumradius = lengths.prod(axis=1) / (4.0 * area)
    inradius = 2.0 * area / lengths.sum(axis=1)
    return MeshQualityReport(
        min_angle=float(triangle_angles(mesh).min()),
        max_aspect=float((circumradius / (2.0 * inradius)).max()),
        triangle_count=mesh.n_triangles,
        vertex_count=mesh.n_vertices,
        h_min=float(lengths.min()),
        h_max=float(lengths.max()),
    )


def barycentric(mesh: Mesh, t: int, x: float, y: float) -> np.ndarray:
    a, b, c = mesh.vertices[mesh.triangles[t]]
    det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    l1 = ((x - a[0]) * (c[1] - a[1]) - (y - a[1]) * (c[0] - a[0])) / det
    l2 = ((b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0])) / det
    return np.array([1.0 - l1 - l2, l1, l2])


def _locate_grid(mesh: Mesh, x, y):
    x0, y0, dx, dy, nx, ny = mesh.grid
    s = (np.asarray(x, dtype=float) - x0) / dx
    t = (np.asarray(y, dtype=float) - y0) / dy
    tol = 1e-12 * max(nx, ny)
    outside = (s < -tol) | (s > nx + tol) | (t < -tol) | (t > ny + tol)
    i = np.clip(np.floor(s), 0, nx - 1).astype(np.int64)
    j = np.clip(np.floor(t), 0, ny - 1).astype(np.int64)
    s = s - i
    t = t - j
    lower = s >= t
    cell = j * nx + i
    tri = 2 * cell + np.where(lower, 0, 1)
    bary = np.where(lower[..., None],
                    np.stack([1.0 - s, s - t, t], axis=-1),
                    np.stack([1.0 - t, s, t - s], axis=-1))
    return tri, bary, outside


def locate_point(mesh: Mesh, p: Sequence[float], seed: int = 0):
    """Containing triangle index and barycentric coordinates of ``p``.

    Structured meshes use arithmetic lookup; otherwise a visibility walk from
    ``seed`` with an exhaustive search when the walk leaves the mesh (holes
    make the domain non-convex).  Raises ``OutsideMeshError``.
    """
    x, y = float(p[0]), float(p[1])
    if mesh.grid is not None:
        tri, bary, outside = _locate_grid(mesh, x, y)
        if outside:
            raise OutsideMeshError(f"point ({x}, {y}) is outside the mesh")
        return int(tri), bary
    t = _walk(mesh, x, y, seed)
    if t is None:
        t = _exhaustive(mesh, x, y)
    return t, barycentric(mesh, t, x, y)


def _walk(mesh: Mesh, x, y, t):
    tris = mesh.triangles
    nb = mesh.neighbors
    v = mesh.vertices
    t = int(t) if 0 <= t < len(tris) else 0
    for step in range(len(tris) + 3):
        lam = barycentric(mesh, t, x, y)
        if lam.min() >= -BARY_TOL:
            return t
        # step across the edge opposite the most negative coordinate
        i = int(np.argmin(lam))
        nxt = nb[t, i]
        if nxt < 0:
            return None
        t = int(nxt)
    return None


def _exhaustive(mesh: Mesh, x, y):
    p = mesh.vertices[mesh.triangles]
    a, b, c = p[:, 0], p[:, 1], p[:, 2]
    det = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
    l1 = ((x - a[:, 0]) * (c[:, 1] - a[:, 1]) - (y - a[:, 1]) * (c[:, 0] - a[:, 0])) / det
    l2 = ((b[:, 0] - a[:, 0]) * (y - a[:, 1]) - (b[:, 1] - a[:, 1]) * (x - a[:, 0])) / det
    lam_min = np.minimum(np.minimum(l1, l2), 1.0 - l1 - l2)
    hit = np.nonzero(lam_min >= -BARY_TOL)[0]
    if len(hit) == 0:
        raise OutsideMeshError(f"point ({x}, {y}) is outside the mesh")
    return int(hit[np.argmax(lam_min[hit])])


def locate_points(mesh: Mesh, points: np.ndarray):
    """Vectorised ``locate_point`` for an (n, 2) array."""
    points = np.asarray(points, dtype=float)
    if mesh.grid is not None:
        tri, bary, outside = _locate_grid(mesh, points[:, 0], points[:, 1])
        if outside.any():
            k = int(np.nonzero(outside)[0][0])
            raise OutsideMeshError(f"point {tuple(points[k])} is outside the mesh")
        return tri, bary
    tri = np.empty(len(points), dtype=np.int64)
    bary = np.empty((len(points), 3))
    seed = 0
    for k, (x, y) in enumerate(points):
        t, lam = locate_point(mesh, (x, y), seed)
        tri[k] = t
        bary[k] = lam
        seed = t
    return tri, bary


def interpolate(mesh: Mesh, values: np.ndarray, points: np.ndarray) -> np.ndarray:
    tri, bary = locate_points(mesh, points)
    return np.einsum("ij,ij->i", bary, np.asarray(values)[mesh.triangles[tri]])


# -- text format -------------------------------------------------------------

def format_mesh(mesh: Mesh) -> str:
    lines = [f"mesh 2 {mesh.n_vertices} {mesh.n_triangles} {len(mesh.boundary_edges)}"]
    lines += [f"v {x:.17g} {y:.17g}" for x, y in mesh.vertices]
    lines += [f"t {i} {j} {k}" for i, j, k in mesh.triangles]
    lines += [f"b {i} {j} {mesh.tag_name(tag)}"
              for (i, j), tag in zip(mesh.boundary_edges, mesh.edge_tags)]
    return "\n".join(lines) + "\n"


def write_mesh(mesh: Mesh, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_mesh(mesh))


def parse_mesh(text: str) -> Mesh:
    """Inverse of ``format_mesh``.  Malformed input raises ValidationError."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0][:2] != ["mesh", "2"] or len(lines[0]) != 5:
        raise ValidationError("mesh file must start with 'mesh 2 <V> <T> <B>'", key="mesh")
    try:
        nv, nt, nb = map(int, lines[0][2:])
        body = lines[1:]
        if len(body) != nv + nt + nb:
            raise ValueError(f"expected {nv + nt + nb} records, found {len(body)}")
        vrec, trec, brec = body[:nv], body[nv:nv + nt], body[nv + nt:]
        for recs, head, width in ((vrec, "v", 3), (trec, "t", 4), (brec, "b", 4)):
            for r in recs:
                if r[0] != head or len(r) != width:
                    raise ValueError(f"malformed record {' '.join(r)!r}")
        vertices = np.array([[float(r[1]), float(r[2])] for r in vrec]).reshape(-1, 2)
        triangles = np.array([[int(x) for x in r[1:4]] for r in trec],
                             dtype=np.int64).reshape(-1, 3)
        edges = np.array([[int(r[1]), int(r[2])] for r in brec], dtype=np.int64).reshape(-1, 2)
        tags = []
        for r in brec:
            if r[3] == "outer":
                tags.append(OUTER)
            elif r[3].startswith("hole:") and r[3][5:].isdigit():
                tags.append(int(r[3][5:]))
            else:
                raise ValueError(f"unknown boundary tag {r[3]!r}")
    except ValueError as exc:
        raise ValidationError(f"malformed mesh file: {exc}", key="mesh") from None
    for name, idx in (("triangle", triangles), ("boundary edge", edges)):
        if idx.size and (idx.min() < 0 or idx.max() >= nv):
            raise ValidationError(f"{name} refers to a missing vertex", key="mesh")
    tags = np.array(tags, dtype=np.int64)
    mesh = Mesh(vertices, triangles, edges, tags, h=float("nan"))
    holes = reconstruct_holes(mesh)
    lengths = np.hypot(*(vertices[edges[:, 1]] - vertices[edges[:, 0]]).T) if nb else [0.0]
    return Mesh(vertices, triangles, edges, tags, h=float(np.max(lengths)), holes=holes)


def read_mesh(path) -> Mesh:
    with open(path) as fh:
        return parse_mesh(fh.read())


def reconstruct_holes(mesh: Mesh) -> Tuple[Hole, ...]:
    """Recover hole centres and radii from the tagged rim polygons.

    The area centroid of a regular polygon is its centre, also after chords
    have been subdivided; the original polygon vertices lie on the circle,
    so the radius is the largest vertex distance.
    """
    holes = []
    tags = mesh.edge_tags
    for k in range(int(tags.max()) + 1 if (tags >= 0).any() else 0):
        e = mesh.boundary_edges[tags == k]
        if len(e) == 0:
            raise MeshError(f"hole tags are not contiguous: hole:{k} missing")
        p, q = mesh.vertices[e[:, 0]], mesh.vertices[e[:, 1]]
        cross = p[:, 0] * q[:, 1] - p[:, 1] * q[:, 0]
        a = 0.5 * cross.sum()
        cx = ((p[:, 0] + q[:, 0]) * cross).sum() / (6.0 * a)
        cy = ((p[:, 1] + q[:, 1]) * cross).sum() / (6.0 * a)
        idx = np.unique(e)
        r = float(np.hypot(*(mesh.vertices[idx] - [cx, cy]).T).max())
        holes.append(Hole(center=(float(cx), float(cy)), radius=r))
    return tuple(holes)
