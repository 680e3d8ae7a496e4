"""Nodal P1 fields, L2 norms and the field text format."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from ..errors import ValidationError
from ..functions import AnalyticFunction
from ..mesh.core import Mesh, locate_points
from .assembly import triangle_quadrature


@dataclass(frozen=True, eq=False)
class ScalarField:
    mesh: Mesh
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.mesh.n_vertices,):
            raise ValidationError(
                f"field has {values.size} values for {self.mesh.n_vertices} vertices")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def at_points(self, points) -> np.ndarray:
        """Barycentric interpolation at arbitrary points of the mesh."""
        tri, bary = locate_points(self.mesh, np.asarray(points, dtype=float).reshape(-1, 2))
        return np.einsum("ij,ij->i", bary, self.values[self.mesh.triangles[tri]])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


Reference = Union[AnalyticFunction, ScalarField, None]


def l2_error(field: ScalarField, reference: Reference = None) -> float:
    """``||field - reference||_{L2}`` over the mesh of ``field``.

    Uses the edge-midpoint rule.  A ScalarField reference on another mesh is
    interpolated at this mesh's quadrature points; ``None`` gives the norm of
    ``field`` itself.
    """
    mesh = field.mesh
    pts, w, basis = triangle_quadrature(mesh)
    uh = np.einsum("qi,ti->tq", basis, field.values[mesh.triangles])
    if reference is None:
        ref = 0.0
    elif isinstance(reference, AnalyticFunction):
        ref = reference(pts[..., 0], pts[..., 1])
    elif reference.mesh is mesh:
        ref = np.einsum("qi,ti->tq", basis, reference.values[mesh.triangles])
    else:
        ref = reference.at_points(pts.reshape(-1, 2)).reshape(w.shape)
    return float(np.sqrt(np.sum(w * (uh - ref) ** 2)))


def format_field(field: ScalarField) -> str:
    return "\n".join([f"field {len(field.values)}"]
                     + [f"{v:.17g}" for v in field.values]) + "\n"


def write_field(field: ScalarField, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_field(field))


def parse_field(text: str, mesh: Mesh) -> ScalarField:
    tokens = text.split()
    if len(tokens) < 2 or tokens[0] != "field":
        raise ValidationError("field file must start with 'field <n>'")
    n = int(tokens[1])
    if len(tokens) != n + 2:
        raise ValidationError(f"expected {n} values, found {len(tokens) - 2}")
    return ScalarField(mesh, np.array([float(t) for t in tokens[2:]]))


def read_field(path, mesh: Mesh) -> ScalarField:
    with open(path) as fh:
        return parse_field(fh.read(), mesh)
