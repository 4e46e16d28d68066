"""Visibility center of a point set, via the geodesic center of windows.

A point x fails to see u exactly when the shortest path from x to u bends;
if r is the last bend, x must travel at least d(x, H(u, r)) to see u.  The
visibility center of U is therefore the geodesic center of the minimal
windows H(u, r) over reflex vertices r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .center import CenterResult, geodesic_center
from .errors import EmptySiteSet, GrazingWindow, NotReflex, NotVisible
from .geometry import (
    Polygon,
    Triangulation,
    _require_inside,
    as_point,
    triangulate,
    visible,
)
from .halfpolygon import HalfPolygon, Window, build_window, contains_half, sort_and_filter
from .shortest_path import GeodesicPath, _vertex_id, distance_to_half_polygon, geodesic


@dataclass(frozen=True, eq=False)
class SiteDistance:
    site: np.ndarray
    distance: float
    path: GeodesicPath | None
    window: Window | None


@dataclass(frozen=True, eq=False)
class VisibilityAnswer:
    center: CenterResult
    per_site: tuple
    windows: tuple = field(default=(), repr=False)

    @property
    def radius(self) -> float:
        return self.center.radius


def distance_to_visibility(P: Polygon, T: Triangulation, x, u):
    """Length of the shortest path from x to a point that sees u, with that path and the window."""
    x, u = as_point(x), as_point(u)
    _require_inside(P, x, u)
    if math.dist(x, u) <= P.tol or visible(P, x, u):
        return 0.0, None, None
    path = geodesic(P, T, x, u)
    # last bend before u; bends are reflex vertices
    r = path.indices[-2]
    if r < 0:
        r = _vertex_id(P, path.waypoints[-2])
    w = build_window(P, u, r)
    hit = distance_to_half_polygon(P, T, x, w.half)
    return hit.distance, hit.path, w


def _windows_at(P: Polygon, r: int, U, next_id: int) -> list:
    """The minimal windows at reflex vertex r: one per rotational direction."""
    groups = {0: [], 1: []}
    for u in U:
        try:
            w = build_window(P, u, r, next_id)
        except (GrazingWindow, NotVisible, NotReflex):
            continue
        next_id += 1
        # which of the two edges at r the window hugs
        side = 0 if w.half.q.edge_index == r and w.half.q.t == 0.0 else 1
        groups[side].append(w)
    out = []
    for ws in groups.values():
        best = None
        for w in ws:
            if best is None or contains_half(best.half, w.half):
                best = w
        if best is not None:
            out.append(best)
    return out


def compute_H_reflex(P: Polygon, U) -> list:
    """Minimal windows H(u, r) over all reflex vertices r and sites u, sorted and filtered."""
    U = [as_point(u) for u in U]
    windows = []
    for r in np.nonzero(P.reflex)[0]:
        for w in _windows_at(P, int(r), U, 0):
            windows.append(w)
    halves = []
    for i, w in enumerate(windows):
        h = w.half
        halves.append((HalfPolygon(h.p, h.q, i, P), w))
    kept = sort_and_filter([h for h, _ in halves])
    by_id = {h.id: w for h, w in halves}
    return [Window(h, by_id[h.id].source, by_id[h.id].fulcrum, by_id[h.id].tip) for h in kept]


def _kernel_point(P: Polygon, T: Triangulation, U) -> np.ndarray:
    """Some point seeing every site; used when no window exists (every site sees all of P)."""
    tri = T.triangles[0]
    return P.vertices[list(tri)].mean(axis=0)


def visibility_center(P: Polygon, U, seed: int = 0) -> VisibilityAnswer:
    """Point minimising the maximum distance one must travel to see each site."""
    U = [as_point(u) for u in U]
    if not U:
        raise EmptySiteSet("no sites")
    _require_inside(P, *U)
    T = triangulate(P)
    windows = compute_H_reflex(P, U)
    if not windows:
        c = _kernel_point(P, T, U)
        res = CenterResult(c, 0.0, (), None, False, 0, None, ())
    else:
        res = geodesic_center(P, [w.half for w in windows], seed=seed, T=T)
    per_site = []
    for u in U:
        d, path, w = distance_to_visibility(P, T, res.center, u)
        per_site.append(SiteDistance(u, d, path, w))
    return VisibilityAnswer(res, tuple(per_site), tuple(windows))


def visibility_center_of_polygon(P: Polygon, seed: int = 0) -> VisibilityAnswer:
    """Visibility center of the polygon's own vertices."""
    return visibility_center(P, list(P.vertices), seed=seed)
