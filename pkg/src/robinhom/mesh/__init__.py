from .core import (OUTER, Mesh, MeshQualityReport, barycentric, format_mesh, interpolate,
                   locate_point, locate_points, mesh_rectangle, parse_mesh, quality_report,
                   read_mesh, reconstruct_holes, triangle_angles, write_mesh)
from .perforated import mesh_perforated, rim_polygon, rim_segments

__all__ = [
    "OUTER", "Mesh", "MeshQualityReport", "barycentric", "format_mesh", "interpolate",
    "locate_point", "locate_points", "mesh_perforated", "mesh_rectangle", "parse_mesh",
    "quality_report", "read_mesh", "reconstruct_holes", "rim_polygon", "rim_segments",
    "triangle_angles", "write_mesh",
]
