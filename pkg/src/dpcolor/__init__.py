"""DP-coloring engine and discharging auditor for plane graphs."""

from .dp_cover import CoverGraph, build_cover, is_dp_coloring, straighten
from .errors import DPColorError
from .plane_graph import Graph, PlaneGraph, from_faces, trace_faces
from .solver import certify_dp_k, certify_extension, extend, solve

__all__ = [
    "CoverGraph", "DPColorError", "Graph", "PlaneGraph", "build_cover", "certify_dp_k", "certify_extension",
    "extend", "from_faces", "is_dp_coloring", "solve", "straighten", "trace_faces",
]
__version__ = "0.1.0"
