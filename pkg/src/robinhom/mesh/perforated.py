"""Quality meshes of a rectangle with circular holes removed."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from ..errors import MeshError, ValidationError
from ..geometry import DomainSpec, Hole
from .cdt import ConstrainedTriangulation, Refiner
from .core import OUTER, Mesh

# Refinement target; Ruppert's algorithm terminates for bounds up to ~20.7 deg.
REFINE_MIN_ANGLE = 20.5
GRADING = 0.5
DEFAULT_MAX_TRIANGLES = 2_000_000


def rim_segments(hole: Hole, min_segments: int) -> int:
    """Segment count of the inscribed polygon: at least ``min_segments`` and
    enough for edges of about ``h_near = r/2``."""
    h_near = 0.5 * hole.radius
    return max(int(min_segments), math.ceil(2.0 * math.pi * hole.radius / h_near))


def rim_polygon(hole: Hole, n: int) -> np.ndarray:
    theta = 2.0 * math.pi * np.arange(n) / n
    cx, cy = hole.center
    return np.column_stack([cx + hole.radius * np.cos(theta),
                            cy + hole.radius * np.sin(theta)])


def validate_holes(domain: DomainSpec, holes: Sequence[Hole]) -> None:
    for k, hole in enumerate(holes):
        if not hole.radius > 0:
            raise ValidationError(f"hole {k} has non-positive radius", key="holes")
        if not domain.contains(hole.center) or \
                domain.boundary_distance(hole.center) <= hole.radius:
            raise ValidationError(f"hole {k} touches or crosses the outer boundary",
                                  key="holes")
    if len(holes) > 1:
        centers = np.array([h.center for h in holes])
        radii = np.array([h.radius for h in holes])
        tree = cKDTree(centers)
        for i, j in sorted(tree.query_pairs(2.0 * radii.max())):
            if math.dist(holes[i].center, holes[j].center) <= radii[i] + radii[j]:
                raise ValidationError(f"holes {i} and {j} overlap or touch", key="holes")


class _HoleIndex:
    """Nearest-hole queries for the domain test and the size field."""

    def __init__(self, holes, polygons, h_far, grading):
        self.holes = holes
        self.h_far = h_far
        self.grading = grading
        self.centers = np.array([h.center for h in holes]).reshape(-1, 2)
        self.radii = np.array([h.radius for h in holes])
        self.rmax = float(self.radii.max()) if len(holes) else 0.0
        self.tree = cKDTree(self.centers) if len(holes) else None
        self.nsides = [len(p) for p in polygons]
        self.k = min(4, len(holes))

    def inside_hole(self, x, y):
        if self.tree is None:
            return False
        for k in self.tree.query_ball_point((x, y), self.rmax):
            cx, cy = self.holes[k].center
            r = self.holes[k].radius
            n = self.nsides[k]
            dx, dy = x - cx, y - cy
            d = math.hypot(dx, dy)
            if d >= r:
                continue
            if d <= r * math.cos(math.pi / n):
                return True
            # between apothem and circumradius: test against the polygon edge
            theta = math.atan2(dy, dx) % (2.0 * math.pi)
            j = int(theta / (2.0 * math.pi / n)) % n
            t0 = 2.0 * math.pi * j / n
            t1 = 2.0 * math.pi * (j + 1) / n
            ax, ay = r * math.cos(t0), r * math.sin(t0)
            bx, by = r * math.cos(t1), r * math.sin(t1)
            if (bx - ax) * (dy - ay) - (by - ay) * (dx - ax) > 0:
                return True
        return False

    def size(self, x, y):
        if self.tree is None:
            return self.h_far
        dist, idx = self.tree.query((x, y), k=self.k)
        dist = np.atleast_1d(dist)
        idx = np.atleast_1d(idx)
        r = self.radii[idx]
        h = 0.5 * r + self.grading * np.maximum(dist - r, 0.0)
        return min(self.h_far, float(h.min()))


def mesh_perforated(domain: DomainSpec, holes: Sequence[Hole], h_far: float,
                    min_segments: int = 16, *, min_angle: float = REFINE_MIN_ANGLE,
                    grading: float = GRADING,
                    max_triangles: int = DEFAULT_MAX_TRIANGLES) -> Mesh:
    """Graded constrained Delaunay mesh of ``domain`` minus ``holes``.

    Each hole becomes a regular inscribed polygon (see ``rim_segments``).
    The size field grows from ``r/2`` at a rim with slope ``grading`` up to
    ``h_far``.  Triangles whose centroid lies inside a hole polygon are
    discarded.  Boundary edges are oriented with the domain on their left.
    """
    holes = tuple(holes)
    if domain.dimension != 2:
        raise ValidationError("meshing is two-dimensional", key="domain")
    if not h_far > 0:
        raise ValidationError("h_far must be positive", key="mesh.h_far")
    if min_segments < 3:
        raise ValidationError("min_segments must be >= 3", key="mesh.min_segments")
    validate_holes(domain, holes)

    x0, x1, y0, y1 = domain.xmin, domain.xmax, domain.ymin, domain.ymax
    cdt = ConstrainedTriangulation(x0, x1, y0, y1)

    # outer boundary, counterclockwise, pre-split to pieces <= h_far
    nx = max(1, math.ceil((x1 - x0) / h_far - 1e-9))
    ny = max(1, math.ceil((y1 - y0) / h_far - 1e-9))
    sx = x0 + (x1 - x0) * np.arange(nx) / nx
    sy = y0 + (y1 - y0) * np.arange(ny) / ny
    outer = ([(x, y0) for x in sx] + [(x1, y) for y in sy]
             + [(x1 - (x - x0), y1) for x in sx] + [(x0, y1 - (y - y0)) for y in sy])
    outer_ids = [cdt.insert_point(x, y)[0] for x, y in outer]
    for a, b in zip(outer_ids, outer_ids[1:] + outer_ids[:1]):
        cdt.segments[(min(a, b), max(a, b))] = OUTER

    polygons = [rim_polygon(h, rim_segments(h, min_segments)) for h in holes]
    rim_ids = []
    for k, poly in enumerate(polygons):
        ids = [cdt.insert_point(float(x), float(y))[0] for x, y in poly]
        rim_ids.append(ids)
    for k, ids in enumerate(rim_ids):
        for a, b in zip(ids, ids[1:] + ids[:1]):
            cdt.segments[(min(a, b), max(a, b))] = k

    index = _HoleIndex(holes, polygons, h_far, grading)

    def in_domain(x, y):
        return x0 < x < x1 and y0 < y < y1 and not index.inside_hole(x, y)

    refiner = Refiner(cdt, in_domain, index.size, min_angle, max_triangles)
    refiner.run()
    return _extract(cdt, refiner, holes, h_far)


def _extract(cdt, refiner, holes, h_far) -> Mesh:
    keep = [t for t, ok in enumerate(cdt.alive) if ok and refiner.triangle_in_domain(t)]
    if not keep:
        raise MeshError("no triangles left inside the domain")
    tris = np.array([cdt.tv[t] for t in keep], dtype=np.int64)
    used = np.unique(tris)
    remap = np.full(len(cdt.xs), -1, dtype=np.int64)
    remap[used] = np.arange(len(used))
    vertices = np.column_stack([np.asarray(cdt.xs)[used], np.asarray(cdt.ys)[used]])
    tris = remap[tris]

    # boundary edges: edges with one kept triangle, oriented as in that triangle
    directed = {}
    for t in tris:
        for i in range(3):
            a, b = int(t[i]), int(t[(i + 1) % 3])
            directed[(a, b)] = True
    bedges, tags = [], []
    old = used
    for t in tris:
        for i in range(3):
            a, b = int(t[i]), int(t[(i + 1) % 3])
            if (b, a) in directed:
                continue
            key = (min(old[a], old[b]), max(old[a], old[b]))
            tag = cdt.segments.get(key)
            if tag is None:
                raise MeshError(f"boundary edge ({a}, {b}) is not on a constraint")
            bedges.append((a, b))
            tags.append(tag)
    order = sorted(range(len(bedges)), key=lambda i: (tags[i] if tags[i] >= 0 else -1,
                                                      bedges[i]))
    bedges = [bedges[i] for i in order]
    tags = [tags[i] for i in order]
    return Mesh(vertices, tris, np.array(bedges, dtype=np.int64).reshape(-1, 2),
                np.array(tags, dtype=np.int64), h=float(h_far), holes=holes)
