"""Visibility centers of point sets in simple polygons, computed as geodesic centers of half-polygons."""

from .center import CenterResult, geodesic_center
from .chord_oracle import Side, build_coarse_cover, chord_oracle, relative_center
from .geometry import (
    BoundaryPoint,
    Polygon,
    PolyChord,
    boundary_point,
    point_in_polygon,
    ray_shoot,
    triangulate,
    validate_polygon,
    visible,
)
from .halfpolygon import HalfPolygon, Window, build_window, half_polygon, sort_and_filter
from .lpdisk import disk, half_plane, min_feasible_disk
from .shortest_path import distance_to_half_polygon, geodesic, radius_at
from .visibility import (
    compute_H_reflex,
    distance_to_visibility,
    visibility_center,
    visibility_center_of_polygon,
)

__all__ = [
    "BoundaryPoint", "CenterResult", "HalfPolygon", "PolyChord", "Polygon", "Side", "Window",
    "boundary_point", "build_coarse_cover", "build_window", "chord_oracle", "compute_H_reflex",
    "disk", "distance_to_half_polygon", "distance_to_visibility", "geodesic", "geodesic_center",
    "half_plane", "half_polygon", "min_feasible_disk", "point_in_polygon", "radius_at", "ray_shoot",
    "relative_center", "sort_and_filter", "triangulate", "validate_polygon", "visibility_center",
    "visibility_center_of_polygon", "visible",
]
