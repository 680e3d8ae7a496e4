from .assembly import (assemble_load, assemble_mass, assemble_robin_boundary,
                       assemble_robin_load, assemble_stiffness, element_mass,
                       element_stiffness, triangle_quadrature)
from .field import ScalarField, format_field, l2_error, parse_field, read_field, write_field
from .sparse import CGResult, LinearSystem, SparseSymMatrix, default_max_iter, solve_cg

__all__ = [
    "CGResult", "LinearSystem", "ScalarField", "SparseSymMatrix", "assemble_load",
    "assemble_mass", "assemble_robin_boundary", "assemble_robin_load", "assemble_stiffness",
    "default_max_iter", "element_mass", "element_stiffness", "format_field", "l2_error",
    "parse_field", "read_field", "solve_cg", "triangle_quadrature", "write_field",
]
