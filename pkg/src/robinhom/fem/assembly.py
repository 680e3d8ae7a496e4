"""P1 assembly on triangle meshes: stiffness, mass, Robin boundary terms and
load vectors."""

from __future__ import annotations

import numpy as np

from ..errors import ValidationError
from ..functions import AnalyticFunction
from ..mesh.core import Mesh, reconstruct_holes
from .sparse import SparseSymMatrix

# 2-point Gauss rule on [0, 1]
_GAUSS_T = np.array([0.5 - 0.5 / np.sqrt(3.0), 0.5 + 0.5 / np.sqrt(3.0)])


def p1_gradients(mesh: Mesh):
    """Constant basis gradients per triangle, shape (T, 3, 2), and areas."""
    p = mesh.vertices[mesh.triangles]
    x, y = p[..., 0], p[..., 1]
    # gradient of the basis function at local vertex i: rot90 of opposite edge / (2A)
    ex = np.stack([x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], axis=1)
    ey = np.stack([y[:, 2] - y[:, 1], y[:, 0] - y[:, 2], y[:, 1] - y[:, 0]], axis=1)
    area = mesh.signed_areas
    grads = np.stack([-ey, ex], axis=-1) / (2.0 * area[:, None, None])
    return grads, area


def element_stiffness(mesh: Mesh) -> np.ndarray:
    grads, area = p1_gradients(mesh)
    return area[:, None, None] * np.einsum("tik,tjk->tij", grads, grads)


def element_mass(mesh: Mesh) -> np.ndarray:
    area = mesh.signed_areas
    block = np.array([[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]])
    return (area / 12.0)[:, None, None] * block[None]


def _scatter(n, conn, blocks) -> SparseSymMatrix:
    k = conn.shape[1]
    rows = np.repeat(conn, k, axis=1)
    cols = np.tile(conn, (1, k))
    return SparseSymMatrix.from_triplets(n, rows, cols, blocks.reshape(len(conn), -1))


def assemble_stiffness(mesh: Mesh) -> SparseSymMatrix:
    return _scatter(mesh.n_vertices, mesh.triangles, element_stiffness(mesh))


def assemble_mass(mesh: Mesh) -> SparseSymMatrix:
    return _scatter(mesh.n_vertices, mesh.triangles, element_mass(mesh))


def _selected_edges(mesh: Mesh, which):
    mask = mesh.edges_with(which)
    return mesh.boundary_edges[mask], mesh.edge_tags[mask]


def assemble_robin_boundary(mesh: Mesh, which, alpha: float) -> SparseSymMatrix:
    """``alpha * int u v dS`` over the boundary edges selected by ``which``."""
    if alpha < 0:
        raise ValidationError("alpha must be >= 0", key="alpha")
    edges, _ = _selected_edges(mesh, which)
    if alpha == 0 or len(edges) == 0:
        return SparseSymMatrix.zeros(mesh.n_vertices)
    d = mesh.vertices[edges[:, 1]] - mesh.vertices[edges[:, 0]]
    length = np.hypot(d[:, 0], d[:, 1])
    block = np.array([[2.0, 1.0], [1.0, 2.0]])
    blocks = (alpha * length / 6.0)[:, None, None] * block[None]
    return _scatter(mesh.n_vertices, edges, blocks)


def triangle_quadrature(mesh: Mesh):
    """Edge-midpoint rule: points (T, 3, 2), weights (T, 3), basis values (3, 3).

    ``basis[q, i]`` is the value of local basis function i at point q.  The
    rule is exact for polynomials of degree two.
    """
    p = mesh.vertices[mesh.triangles]
    pts = 0.5 * np.stack([p[:, 0] + p[:, 1], p[:, 1] + p[:, 2], p[:, 2] + p[:, 0]], axis=1)
    w = np.repeat((mesh.signed_areas / 3.0)[:, None], 3, axis=1)
    basis = np.array([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]])
    return pts, w, basis


def _accumulate(n, conn, local) -> np.ndarray:
    out = np.zeros(n)
    np.add.at(out, conn.ravel(), local.ravel())
    return out


def assemble_load(mesh: Mesh, f: AnalyticFunction) -> np.ndarray:
    """``int f phi_i dx`` with the edge-midpoint rule."""
    pts, w, basis = triangle_quadrature(mesh)
    fq = np.broadcast_to(f(pts[..., 0], pts[..., 1]), w.shape)
    local = np.einsum("tq,qi->ti", w * fq, basis)
    return _accumulate(mesh.n_vertices, mesh.triangles, local)


def edge_quadrature(mesh: Mesh, edges):
    """2-point Gauss points (E, 2, 2), weights (E, 2), basis values (2, 2)."""
    a = mesh.vertices[edges[:, 0]]
    b = mesh.vertices[edges[:, 1]]
    length = np.hypot(*(b - a).T)
    t = _GAUSS_T
    pts = a[:, None, :] + t[None, :, None] * (b - a)[:, None, :]
    w = np.repeat((0.5 * length)[:, None], 2, axis=1)
    basis = np.stack([1.0 - t, t], axis=1)
    return pts, w, basis


def assemble_robin_load(mesh: Mesh, which, alpha: float,
                        data: AnalyticFunction) -> np.ndarray:
    """``alpha * int g phi_i dS`` over the selected boundary edges.

    Outer edges take planar data.  Hole edges take a sphere trace evaluated
    at the unit direction from the owning hole centre.
    """
    if alpha < 0:
        raise ValidationError("alpha must be >= 0", key="alpha")
    edges, tags = _selected_edges(mesh, which)
    n = mesh.n_vertices
    if alpha == 0 or len(edges) == 0:
        return np.zeros(n)
    pts, w, basis = edge_quadrature(mesh, edges)
    g = np.empty(w.shape)
    outer = tags < 0
    if outer.any():
        if not data.is_planar:
            raise ValidationError(f"outer boundary data must be planar, got {data.kind}")
        g[outer] = data(pts[outer, :, 0], pts[outer, :, 1])
    if (~outer).any():
        if not data.is_sphere_trace:
            raise ValidationError(
                f"hole rim data must be a sphere trace, got planar {data.kind!r}")
        holes = mesh.holes or reconstruct_holes(mesh)
        centers = np.array([h.center for h in holes])
        rel = pts[~outer] - centers[tags[~outer]][:, None, :]
        m = rel / np.linalg.norm(rel, axis=-1, keepdims=True)
        g[~outer] = data.on_sphere(m)
    local = alpha * np.einsum("eq,qi->ei", w * g, basis)
    return _accumulate(n, edges, local)
