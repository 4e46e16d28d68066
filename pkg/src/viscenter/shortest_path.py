"""Geodesic shortest paths inside a simple polygon.

Paths are found with the funnel (string pulling) algorithm on the sleeve of
triangles between the two endpoints.  Distances to half-polygons follow the
taut path to one of the chord endpoints and then leave it along the
perpendicular to the chord whenever that is visible.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import UnsortedInput
from .geometry import (
    BoundaryPoint,
    Polygon,
    Triangulation,
    _require_inside,
    _visible_unchecked,
    as_point,
    closest_on_segment,
    cross,
    interior_cone,
)
from .halfpolygon import HalfPolygon, contains_point

ROOT = "root"


@dataclass(frozen=True)
class GeodesicPath:
    waypoints: tuple[tuple[float, float], ...]
    length: float
    # polygon vertex index for each waypoint, -1 for the free endpoints
    indices: tuple[int, ...] = field(default=(), repr=False)

    @property
    def points(self) -> np.ndarray:
        return np.array(self.waypoints)

    def prefix_lengths(self) -> list[float]:
        out = [0.0]
        for a, b in zip(self.waypoints, self.waypoints[1:]):
            out.append(out[-1] + math.dist(a, b))
        return out


def _vertex_id(P: Polygon, x: np.ndarray) -> int:
    d = np.hypot(*(P.vertices - x).T)
    i = int(np.argmin(d))
    return i if d[i] <= P.tol else -1


def _portals(P: Polygon, T: Triangulation, tris: list[int]):
    V = P.vertices
    out = []
    for t0, t1 in zip(tris, tris[1:]):
        i, j = T.shared_diagonal(t0, t1)
        k = next(v for v in T.triangles[t0] if v != i and v != j)
        if cross(V[i] - V[k], V[j] - V[k]) > 0:
            out.append((j, i))  # (left, right)
        else:
            out.append((i, j))
    return out


def _sleeve(T: Triangulation, x, y) -> list[int]:
    best = None
    for s in T.containing(x):
        for t in T.containing(y):
            path = T.dual_path(s, t)
            if best is None or len(path) < len(best):
                best = path
    if best is None:
        raise RuntimeError("point location failed")
    return best


def _string_pull(P: Polygon, x, xid, y, yid, portals):
    V = P.vertices
    # point ids: vertex index, or -1 / -2 for the free endpoints x / y
    left_ids = [xid if xid >= 0 else -1] + [l for l, _ in portals] + [yid if yid >= 0 else -2]
    right_ids = [xid if xid >= 0 else -1] + [r for _, r in portals] + [yid if yid >= 0 else -2]

    def coord(i):
        if i == -1:
            return x
        if i == -2:
            return y
        return V[i]

    path = [left_ids[0]]
    apex = left = right = left_ids[0]
    apex_i = left_i = right_i = 0
    i = 1
    m = len(left_ids)
    while i < m:
        pl, pr = left_ids[i], right_ids[i]
        A = coord(apex)
        # tighten the right side
        if cross(coord(right) - A, coord(pr) - A) >= 0:
            if apex == right or cross(coord(left) - A, coord(pr) - A) < 0:
                right, right_i = pr, i
            else:
                if path[-1] != left:
                    path.append(left)
                apex, apex_i = left, left_i
                left = right = apex
                left_i = right_i = apex_i
                i = apex_i + 1
                continue
        # tighten the left side
        if cross(coord(left) - A, coord(pl) - A) <= 0:
            if apex == left or cross(coord(right) - A, coord(pl) - A) > 0:
                left, left_i = pl, i
            else:
                if path[-1] != right:
                    path.append(right)
                apex, apex_i = right, right_i
                left = right = apex
                left_i = right_i = apex_i
                i = apex_i + 1
                continue
        i += 1
    last = left_ids[-1]
    if path[-1] != last:
        path.append(last)
    return [(pid, coord(pid)) for pid in path]


def _straighten(P: Polygon, nodes):
    """Drop interior waypoints where the path goes straight through."""
    out = [nodes[0]]
    for k in range(1, len(nodes) - 1):
        a = out[-1][1]
        b = nodes[k][1]
        c = nodes[k + 1][1]
        ab, bc = b - a, c - b
        if math.hypot(*ab) <= P.tol:
            continue
        scale = math.hypot(*ab) * max(math.hypot(*bc), 1e-300)
        if abs(cross(ab, bc)) <= 1e-12 * scale and float(ab @ bc) >= 0:
            continue
        out.append(nodes[k])
    out.append(nodes[-1])
    return out


def geodesic(P: Polygon, T: Triangulation, x, y) -> GeodesicPath:
    """Shortest path from x to y inside P."""
    x, y = as_point(x), as_point(y)
    _require_inside(P, x, y)
    return _geodesic(P, T, x, y)


def _geodesic(P, T, x, y) -> GeodesicPath:
    xid, yid = _vertex_id(P, x), _vertex_id(P, y)
    if _visible_unchecked(P, x, y):
        nodes = [(xid, x), (yid if yid >= 0 else -2, y)]
    else:
        tris = _sleeve(T, x, y)
        nodes = _string_pull(P, x, xid, y, yid, _portals(P, T, tris))
        nodes = _straighten(P, nodes)
    # endpoints keep their given coordinates
    nodes[0] = (nodes[0][0], x)
    nodes[-1] = (nodes[-1][0], y)
    pts = [(float(c[0]), float(c[1])) for _, c in nodes]
    ids = [i if i >= 0 else -1 for i, _ in nodes]
    length = sum(math.dist(a, b) for a, b in zip(pts, pts[1:]))
    return GeodesicPath(tuple(pts), length, tuple(ids))


class HitKind(enum.Enum):
    AT_ENDPOINT = "AtEndpoint"
    INTERIOR_PERPENDICULAR = "InteriorPerpendicular"
    ALREADY_INSIDE = "AlreadyInside"


@dataclass(frozen=True)
class HalfPolygonHit:
    distance: float
    terminal: tuple[float, float]
    kind: HitKind
    # taut path from x to the terminal, with polygon vertex indices (-1 = free)
    path: GeodesicPath = field(repr=False, default=None)

    @property
    def anchor(self) -> tuple[float, float]:
        """Last waypoint before the terminal (x itself when the chord is seen directly)."""
        return self.path.waypoints[-2] if len(self.path.waypoints) >= 2 else self.terminal

    @property
    def first_vector(self) -> np.ndarray | None:
        w = self.path.waypoints
        if len(w) < 2:
            return None
        d = np.subtract(w[1], w[0])
        n = math.hypot(*d)
        return d / n if n > 0 else None


def distance_to_segment(P: Polygon, T: Triangulation, x, s0, s1, paths=None):
    """Geodesic distance from x to the segment s0 s1 (a chord or part of one).

    Returns ``(distance, foot, foot_param, path)``.  ``paths`` may supply
    precomputed geodesics from x to s0 and s1.
    """
    x, s0, s1 = as_point(x), as_point(s0), as_point(s1)
    if paths is None:
        paths = (_geodesic(P, T, x, s0), _geodesic(P, T, x, s1))
    best = None
    for path in paths:
        pre = path.prefix_lengths()
        for k, w in enumerate(path.waypoints):
            w = np.array(w)
            foot, t = closest_on_segment(w, s0, s1)
            leg = math.hypot(*(foot - w))
            total = pre[k] + leg
            if best is not None and total >= best[0] - 1e-15:
                continue
            if leg > P.tol and not _visible_unchecked(P, w, foot):
                continue
            wp = path.waypoints[: k + 1]
            ids = path.indices[: k + 1]
            if leg > P.tol:
                wp = wp + ((float(foot[0]), float(foot[1])),)
                ids = ids + (_vertex_id(P, foot),)
            best = (total, foot, t, GeodesicPath(wp, total, ids))
    return best


def distance_to_half_polygon(P: Polygon, T: Triangulation, x, H: HalfPolygon) -> HalfPolygonHit:
    """d(x, H): zero inside H, otherwise the geodesic distance to the chord."""
    x = as_point(x)
    xt = (float(x[0]), float(x[1]))
    if contains_point(H, x):
        return HalfPolygonHit(0.0, xt, HitKind.ALREADY_INSIDE, GeodesicPath((xt,), 0.0, (-1,)))
    p, q = H.chord
    dist, foot, t, path = distance_to_segment(P, T, x, p, q)
    chord_len = math.hypot(*(q - p))
    at_end = min(t, 1.0 - t) * chord_len <= P.tol
    kind = HitKind.AT_ENDPOINT if at_end else HitKind.INTERIOR_PERPENDICULAR
    if at_end:
        foot = p if t < 0.5 else q
    return HalfPolygonHit(float(dist), (float(foot[0]), float(foot[1])), kind, path)


def radius_at(P: Polygon, T: Triangulation, x, H_list) -> float:
    """r(x, H) = max over H of d(x, H)."""
    return max((distance_to_half_polygon(P, T, x, H).distance for H in H_list), default=0.0)


@dataclass(frozen=True, eq=False)
class AugmentedShortestPathTree:
    """Shortest paths from a boundary point to every vertex (and terminal).

    Node keys are ``"root"``, ``("v", i)`` for polygon vertices, ``("e", id)``
    for chord endpoints reached by a path, and ``("t", id)`` for terminals.
    """

    root: BoundaryPoint
    pos: dict
    parent: dict
    dist: dict
    terminal: dict = field(default_factory=dict)
    # unit direction of the edge entering each node (0-length edges included)
    direction: dict = field(default_factory=dict)
    leaf_order: tuple = ()
    hits: dict = field(default_factory=dict, repr=False)

    def children(self) -> dict:
        ch = {k: [] for k in self.pos}
        for k, p in self.parent.items():
            if p is not None:
                ch[p].append(k)
        return ch

    def path_to(self, key) -> list:
        out = [key]
        while self.parent[out[-1]] is not None:
            out.append(self.parent[out[-1]])
        return out[::-1]


def _wrap(angle: float) -> float:
    """Angle in [0, 2pi), snapping values within 1e-9 of 2pi to 0."""
    a = angle % (2 * math.pi)
    return 0.0 if a > 2 * math.pi - 1e-9 else a


def _ordered_leaves(P: Polygon, root: BoundaryPoint, pos, parent, direction) -> tuple:
    ch = {k: [] for k in pos}
    for k, p in parent.items():
        if p is not None:
            ch[p].append(k)
    start, _ = interior_cone(P, root)

    def out_angle(k):
        d = direction[k]
        return math.atan2(d[1], d[0])

    def order_at(node, children):
        if node == ROOT:
            # clockwise sweep from the boundary successor: descending ccw angle from the predecessor
            key = lambda k: (-_wrap(out_angle(k) - start), parent_dist(k))
        else:
            back = -direction[node]
            ref = math.atan2(back[1], back[0])
            key = lambda k: (_wrap(ref - out_angle(k)), parent_dist(k))
        return sorted(children, key=key)

    def parent_dist(k):
        return math.dist(pos[k], pos[parent[k]])

    leaves = []
    stack = [ROOT]
    while stack:
        node = stack.pop()
        kids = order_at(node, ch[node])
        if not kids:
            leaves.append(node)
        stack.extend(reversed(kids))
    return tuple(leaves)


def spt_from_boundary(P: Polygon, T: Triangulation, a: BoundaryPoint) -> AugmentedShortestPathTree:
    """Shortest path tree from boundary point a to all polygon vertices."""
    ax = a.xy
    root_vertex = _vertex_id(P, ax)
    pos = {ROOT: ax}
    parent = {ROOT: None}
    dist = {ROOT: 0.0}
    direction = {ROOT: np.zeros(2)}
    order = []
    for i in range(P.n):
        key = ("v", i)
        if i == root_vertex:
            continue
        path = _geodesic(P, T, ax, P.vertices[i])
        par = path.indices[-2] if len(path.indices) >= 2 else -1
        if len(path.indices) == 2 or par == root_vertex or par < 0:
            parent[key] = ROOT
        else:
            parent[key] = ("v", par)
        pos[key] = P.vertices[i]
        order.append((len(path.waypoints), key))
    # accumulate distances root to leaf
    for _, key in sorted(order):
        pk = parent[key]
        if pk not in dist:
            _fill(pk, parent, pos, dist)
        dist[key] = dist[pk] + math.dist(pos[pk], pos[key])
        d = pos[key] - pos[pk]
        direction[key] = d / math.hypot(*d)
    leaves = _ordered_leaves(P, a, pos, parent, direction)
    return AugmentedShortestPathTree(a, pos, parent, dist, {}, direction, leaves)


def _fill(key, parent, pos, dist):
    chain = [key]
    while chain[-1] not in dist:
        chain.append(parent[chain[-1]])
    for k in reversed(chain[:-1]):
        dist[k] = dist[parent[k]] + math.dist(pos[parent[k]], pos[k])


def check_cyclic_order(root: BoundaryPoint, H_sorted, n: int) -> None:
    prev = -1.0
    for H in H_sorted:
        off = (H.p.s - root.s) % n
        if off < prev - 1e-12:
            raise UnsortedInput("half-polygons are not sorted cyclically from the root")
        prev = off


def augment_to_half_polygons(P: Polygon, T: Triangulation, spt: AugmentedShortestPathTree,
                             H_sorted) -> AugmentedShortestPathTree:
    """Attach one terminal node per half-polygon to a vertex shortest path tree."""
    check_cyclic_order(spt.root, H_sorted, P.n)
    pos = dict(spt.pos)
    parent = dict(spt.parent)
    dist = dict(spt.dist)
    direction = dict(spt.direction)
    terminal = {}
    hits = {}
    ax = spt.root.xy
    root_vertex = _vertex_id(P, ax)
    for H in H_sorted:
        hit = distance_to_half_polygon(P, T, ax, H)
        if hit.kind is HitKind.ALREADY_INSIDE:
            raise ValueError(f"half-polygon {H.id} contains the root")
        hits[H.id] = hit
        ids = hit.path.indices
        # anchor = last tree node on the path (a vertex, or the root)
        if ids[-1] >= 0 and ids[-1] != root_vertex:
            anchor = ("v", ids[-1])
        elif len(ids) >= 2 and ids[-2] >= 0 and ids[-2] != root_vertex:
            anchor = ("v", ids[-2])
        else:
            anchor = ROOT
        tpos = np.array(hit.terminal)
        tkey = ("t", H.id)
        nrm = H.normal()
        prev = anchor
        if math.dist(pos[anchor], tpos) > P.tol and hit.kind is HitKind.AT_ENDPOINT:
            ekey = ("e", H.id)
            pos[ekey] = tpos
            parent[ekey] = anchor
            dist[ekey] = dist[anchor] + math.dist(pos[anchor], tpos)
            d = tpos - pos[anchor]
            direction[ekey] = d / math.hypot(*d)
            prev = ekey
        pos[tkey] = tpos
        parent[tkey] = prev
        dist[tkey] = dist[prev] + math.dist(pos[prev], tpos)
        if math.dist(pos[prev], tpos) > P.tol:
            d = tpos - pos[prev]
            direction[tkey] = d / math.hypot(*d)
        else:
            # 0-length edge: its extension is the chord normal into H
            direction[tkey] = nrm
        terminal[H.id] = tkey
    leaves = _ordered_leaves(P, spt.root, pos, parent, direction)
    return AugmentedShortestPathTree(spt.root, pos, parent, dist, terminal, direction, leaves, hits)
