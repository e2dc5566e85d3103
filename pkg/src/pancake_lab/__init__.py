"""Exact region counting for arrangements of exotic knife shapes in the plane."""

from .arrangement import (
    CONSISTENT, MISMATCH, OPTIMAL_CONFIRMED, RegionReport, build, count_regions_faces,
    count_regions_formula, verify,
)
from .constructions import Construction, best_known, construct
from .formulas import crossing_bound, emit_table, max_regions, region_upper_bound
from .shapes import ShapeInstance, ShapeKind, ValidationError, catalog, instantiate, transform

__version__ = "0.1.0"

__all__ = [
    "CONSISTENT", "MISMATCH", "OPTIMAL_CONFIRMED", "RegionReport", "build", "count_regions_faces",
    "count_regions_formula", "verify", "Construction", "best_known", "construct", "crossing_bound",
    "emit_table", "max_regions", "region_upper_bound", "ShapeInstance", "ShapeKind", "ValidationError",
    "catalog", "instantiate", "transform",
]
