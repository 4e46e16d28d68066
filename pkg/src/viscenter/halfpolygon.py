"""Half-polygons, windows H(u, r), and the cyclic sort with minimality filter.

A half-polygon is given by a chord (p, q) and is the piece of P bounded by
the chord and the clockwise boundary arc from p to q.  Because P is stored
clockwise, that arc lies to the left of the directed chord p -> q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import GrazingWindow, NotReflex, NotVisible
from .geometry import (
    BoundaryPoint,
    Polygon,
    as_point,
    boundary_point,
    interior_cone,
    is_reflex,
    orientation,
    point_in_polygon_many,
    ray_shoot,
    vertex_point,
    visible,
)


@dataclass(frozen=True, eq=False)
class HalfPolygon:
    p: BoundaryPoint
    q: BoundaryPoint
    id: int
    polygon: Polygon = field(repr=False)

    @property
    def chord(self) -> tuple[np.ndarray, np.ndarray]:
        return self.p.xy, self.q.xy

    def arc_offset(self, s: float) -> float:
        """Clockwise boundary distance (in edge units) from p to position s."""
        return (s - self.p.s) % self.polygon.n

    @property
    def arc_length(self) -> float:
        return self.arc_offset(self.q.s)

    @cached_property
    def region(self) -> Polygon:
        """The half-polygon as an explicit (weakly simple) clockwise polygon."""
        P = self.polygon
        pts = [self.p.xy]
        span = self.arc_length
        start = self.p.edge_index + 1
        for k in range(P.n):
            i = (start + k) % P.n
            off = self.arc_offset(float(i))
            if off <= 0.0 or off >= span:
                break
            pts.append(P.vertices[i])
        pts.append(self.q.xy)
        verts = np.array(pts)
        return Polygon(verts, P.bbox_diag)

    def normal(self) -> np.ndarray:
        """Unit normal of the chord pointing into H."""
        p, q = self.chord
        d = q - p
        # H lies to the left of p -> q
        nrm = np.array([-d[1], d[0]])
        return nrm / math.hypot(*nrm)


def half_polygon(P: Polygon, p, q, id: int = 0) -> HalfPolygon:
    """Build a half-polygon from chord endpoints given as points or BoundaryPoints."""
    bp = p if isinstance(p, BoundaryPoint) else boundary_point(P, p)
    bq = q if isinstance(q, BoundaryPoint) else boundary_point(P, q)
    return HalfPolygon(bp, bq, id, P)


def contains_point(H: HalfPolygon, x) -> bool:
    """Membership with the chord itself counting as inside."""
    return bool(point_in_polygon_many(H.region, as_point(x)[None, :])[0] >= 0)


def contains_points(H: HalfPolygon, xs) -> np.ndarray:
    return point_in_polygon_many(H.region, xs) >= 0


def arc_contains(H: HalfPolygon, s: float, slack: float = 1e-12) -> bool:
    """Is boundary position s on the clockwise arc from p to q?"""
    off = H.arc_offset(s)
    return off <= H.arc_length + slack or off >= H.polygon.n - slack


def contains_half(outer: HalfPolygon, inner: HalfPolygon) -> bool:
    """True if ``inner`` is a subset of ``outer`` (arc inclusion)."""
    n = outer.polygon.n
    slack = 1e-12 * n
    a = outer.arc_offset(inner.p.s)
    b = outer.arc_offset(inner.q.s)
    span = outer.arc_length
    if a >= n - slack:
        a = 0.0
    if b <= slack and inner.arc_length > slack:
        b = float(n)
    return a <= span + slack and b <= span + slack and a <= b + slack


@dataclass(frozen=True, eq=False)
class Window:
    half: HalfPolygon
    source: tuple[float, float]
    fulcrum: int
    tip: BoundaryPoint


def build_window(P: Polygon, u, r: int, id: int = 0) -> Window:
    """The half-polygon H(u, r) containing u, cut off by the ray u -> r extended past r."""
    u = as_point(u)
    r %= P.n
    if not is_reflex(P, r):
        raise NotReflex(f"vertex {r} is not reflex")
    vr = P.vertices[r]
    if math.dist(u, vr) <= P.tol or not visible(P, u, vr):
        raise NotVisible(f"vertex {r} is not visible from {tuple(u)}")
    prev, nxt = P.vertices[r - 1], P.vertices[(r + 1) % P.n]
    d = vr - u
    sides = []
    for nb in (prev, nxt):
        s = orientation(u, vr, nb, P.tol)
        if s == 0 and float((nb - vr) @ d) < 0:
            continue  # the edge runs back toward u; the other neighbour decides
        sides.append(s)
    if not sides or 0 in sides or len(set(sides)) != 1:
        raise GrazingWindow(f"line from {tuple(u)} through vertex {r} does not enter a pocket")
    tip = ray_shoot(P, vr, d)
    # split the interior cone at r by the chord direction; u is behind r
    start, span = interior_cone(P, vertex_point(P, r))
    ang_chord = (math.atan2(d[1], d[0]) - start) % (2 * math.pi)
    ang_u = (math.atan2(-d[1], -d[0]) - start) % (2 * math.pi)
    if ang_u > 2 * math.pi - 1e-9:
        ang_u = 0.0
    rp = vertex_point(P, r)
    if ang_u < ang_chord:
        # u is on the side of the edge arriving at r
        half = HalfPolygon(tip, rp, id, P)
    else:
        half = HalfPolygon(rp, tip, id, P)
    return Window(half, (float(u[0]), float(u[1])), r, tip)


def same_chord(H1: HalfPolygon, H2: HalfPolygon) -> bool:
    tol = H1.polygon.tol
    return math.dist(H1.p.coords, H2.p.coords) <= tol and math.dist(H1.q.coords, H2.q.coords) <= tol


def sort_and_filter(H_list) -> list[HalfPolygon]:
    """Cyclic sort by first endpoint; drop duplicates and any H containing another."""
    hs = sorted(H_list, key=lambda h: (h.p.s, h.arc_length, h.id))
    unique: list[HalfPolygon] = []
    for h in hs:
        if not any(same_chord(h, g) for g in unique):
            unique.append(h)
    keep = []
    for h in unique:
        if not any(g is not h and contains_half(h, g) for g in unique):
            keep.append(h)
    return keep
