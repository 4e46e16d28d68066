"""Planar primitives for simple polygons.

Everything here works in floating point with a single relative tolerance,
``EPS_GEOM * bbox_diag``.  Polygons are stored clockwise.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegenerateDirection,
    DuplicateConsecutiveVertex,
    PointOutsidePolygon,
    SelfIntersecting,
    SingleTriangle,
    TooFewVertices,
)

EPS_GEOM = 1e-9


def as_point(p) -> np.ndarray:
    return np.asarray(p, dtype=float).reshape(2)


def cross(u, v) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


def orientation(a, b, c, tol: float | None = None) -> int:
    """Sign of the turn a -> b -> c: +1 left, -1 right, 0 collinear.

    ``tol`` is a distance: c counts as collinear when it lies within ``tol``
    of the line ab.  By default it is ``EPS_GEOM`` times the size of the
    triple.
    """
    a, b, c = as_point(a), as_point(b), as_point(c)
    ab, ac = b - a, c - a
    det = cross(ab, ac)
    scale = max(math.hypot(*ab), math.hypot(*ac))
    if scale == 0.0:
        return 0
    if tol is None:
        tol = EPS_GEOM * scale
    if abs(det) <= tol * scale:
        return 0
    return 1 if det > 0 else -1


class Location(enum.Enum):
    INSIDE = "Inside"
    ON_BOUNDARY = "OnBoundary"
    OUTSIDE = "Outside"


@dataclass(frozen=True, eq=False)
class Polygon:
    """Simple polygon with clockwise vertex order.

    Build instances with :func:`validate_polygon`; the constructor does not
    check anything.
    """

    vertices: np.ndarray
    bbox_diag: float

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def tol(self) -> float:
        return EPS_GEOM * self.bbox_diag

    @cached_property
    def starts(self) -> np.ndarray:
        return self.vertices

    @cached_property
    def ends(self) -> np.ndarray:
        return np.roll(self.vertices, -1, axis=0)

    @cached_property
    def edge_vectors(self) -> np.ndarray:
        return self.ends - self.starts

    @cached_property
    def edge_lengths(self) -> np.ndarray:
        return np.hypot(self.edge_vectors[:, 0], self.edge_vectors[:, 1])

    @cached_property
    def bbox(self) -> tuple[float, float, float, float]:
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])

    @cached_property
    def area(self) -> float:
        return -signed_area(self.vertices)

    @cached_property
    def reflex(self) -> tuple[bool, ...]:
        return tuple(is_reflex(self, i) for i in range(self.n))

    def vertex(self, i: int) -> np.ndarray:
        return self.vertices[i % self.n]

    def coords(self) -> list[tuple[float, float]]:
        return [(float(x), float(y)) for x, y in self.vertices]


@dataclass(frozen=True)
class BoundaryPoint:
    """A point on the boundary, as a parameter along a directed edge."""

    edge_index: int
    t: float
    coords: tuple[float, float]

    @property
    def s(self) -> float:
        """Cyclic boundary position in [0, n)."""
        return self.edge_index + self.t

    @property
    def xy(self) -> np.ndarray:
        return np.array(self.coords)


@dataclass(frozen=True)
class PolyChord:
    a: BoundaryPoint
    b: BoundaryPoint

    @property
    def length(self) -> float:
        return math.dist(self.a.coords, self.b.coords)


def signed_area(pts) -> float:
    pts = np.asarray(pts, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def segment_distance(p0, p1, q0, q1) -> float:
    """Euclidean distance between closed segments p0p1 and q0q1."""
    p0, p1, q0, q1 = map(as_point, (p0, p1, q0, q1))
    d1, d2 = p1 - p0, q1 - q0
    den = cross(d1, d2)
    if den != 0.0:
        t = cross(q0 - p0, d2) / den
        s = cross(q0 - p0, d1) / den
        if 0.0 <= t <= 1.0 and 0.0 <= s <= 1.0:
            return 0.0
    return min(
        point_segment_distance(p0, q0, q1),
        point_segment_distance(p1, q0, q1),
        point_segment_distance(q0, p0, p1),
        point_segment_distance(q1, p0, p1),
    )


def closest_on_segment(x, p, q) -> tuple[np.ndarray, float]:
    """Closest point of segment pq to x and its parameter in [0, 1]."""
    x, p, q = as_point(x), as_point(p), as_point(q)
    d = q - p
    dd = float(d @ d)
    if dd == 0.0:
        return p.copy(), 0.0
    t = min(1.0, max(0.0, float((x - p) @ d) / dd))
    return p + t * d, t


def point_segment_distance(x, p, q) -> float:
    c, _ = closest_on_segment(x, p, q)
    return float(math.hypot(*(as_point(x) - c)))


def validate_polygon(raw_vertices: Iterable[Sequence[float]]) -> Polygon:
    """Check a vertex list and return it as a clockwise :class:`Polygon`."""
    pts = np.array([[float(x), float(y)] for x, y in raw_vertices], dtype=float)
    if len(pts) < 3:
        raise TooFewVertices(f"TooFewVertices: need at least 3 vertices, got {len(pts)}", len(pts))
    if not np.all(np.isfinite(pts)):
        bad = int(np.nonzero(~np.isfinite(pts).all(axis=1))[0][0])
        raise SelfIntersecting(f"SelfIntersecting: non-finite coordinate at vertex {bad}", bad)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    diag = float(math.hypot(*(hi - lo)))
    tol = EPS_GEOM * diag
    n = len(pts)
    for i in range(n):
        if math.dist(pts[i], pts[(i + 1) % n]) <= tol:
            raise DuplicateConsecutiveVertex(
                f"DuplicateConsecutiveVertex: vertices {i} and {(i + 1) % n} coincide", i
            )
    # adjacent edges must not fold back onto each other
    for i in range(n):
        a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
        if orientation(a, b, c, tol) == 0 and float((a - b) @ (c - b)) > 0:
            raise SelfIntersecting(f"SelfIntersecting: boundary folds back at vertex {i}", i)
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            if segment_distance(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]) <= tol:
                raise SelfIntersecting(f"SelfIntersecting: edges {i} and {j} touch", i)
    if signed_area(pts) > 0:
        pts = np.vstack([pts[:1], pts[:0:-1]])
    pts.setflags(write=False)
    return Polygon(pts, diag)


def point_in_polygon_many(P: Polygon, xs) -> np.ndarray:
    """Vectorised point location: 1 inside, 0 on boundary, -1 outside."""
    xs = np.asarray(xs, dtype=float).reshape(-1, 2)
    a, e = P.starts, P.edge_vectors
    rel = xs[:, None, :] - a[None, :, :]
    ee = np.maximum((e * e).sum(axis=1), 1e-300)
    t = np.clip((rel * e[None]).sum(axis=2) / ee, 0.0, 1.0)
    diff = rel - t[..., None] * e[None]
    dist = np.sqrt((diff ** 2).sum(axis=2)).min(axis=1)
    on_boundary = dist <= P.tol

    y0 = a[None, :, 1]
    y1 = P.ends[None, :, 1]
    px, py = xs[:, 0:1], xs[:, 1:2]
    straddle = (y0 > py) != (y1 > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        xint = a[None, :, 0] + (py - y0) * (P.ends[None, :, 0] - a[None, :, 0]) / (y1 - y0)
    crossings = np.count_nonzero(straddle & (px < xint), axis=1)
    out = np.where(crossings % 2 == 1, 1, -1)
    out[on_boundary] = 0
    return out


def point_in_polygon(P: Polygon, x) -> Location:
    code = int(point_in_polygon_many(P, [as_point(x)])[0])
    return {1: Location.INSIDE, 0: Location.ON_BOUNDARY, -1: Location.OUTSIDE}[code]


def _require_inside(P: Polygon, *pts) -> None:
    codes = point_in_polygon_many(P, np.array([as_point(p) for p in pts]))
    if np.any(codes < 0):
        raise PointOutsidePolygon(f"point outside polygon: {pts[int(np.argmin(codes))]}")


def _contacts(P: Polygon, x: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Parameters t (in units of |d|) where the line x + t*d meets the boundary."""
    a, e = P.starts, P.edge_vectors
    dl = math.hypot(*d)
    den = d[0] * e[:, 1] - d[1] * e[:, 0]
    w = a - x
    num_t = w[:, 0] * e[:, 1] - w[:, 1] * e[:, 0]
    num_s = w[:, 0] * d[1] - w[:, 1] * d[0]
    lens = P.edge_lengths
    par = np.abs(den) <= 1e-12 * dl * lens
    ts = []
    with np.errstate(divide="ignore", invalid="ignore"):
        t = num_t / den
        s = num_s / den
    eps_s = P.tol / lens
    ok = ~par & (s >= -eps_s) & (s <= 1 + eps_s)
    ts.append(t[ok])
    # collinear edges: record both endpoints
    if np.any(par):
        dist = np.abs(num_s[par]) / dl
        col = np.nonzero(par)[0][dist <= P.tol]
        for i in col:
            for p in (a[i], P.ends[i]):
                ts.append(np.array([float((p - x) @ d) / (dl * dl)]))
    # vertices within tolerance of the line also count as contacts
    rel = a - x
    tv = (rel @ d) / (dl * dl)
    off = np.abs(rel[:, 0] * d[1] - rel[:, 1] * d[0]) / dl
    ts.append(tv[off <= P.tol])
    return np.concatenate(ts) if ts else np.zeros(0)


def visible(P: Polygon, x, y) -> bool:
    """True iff the closed segment xy stays inside P (grazing allowed)."""
    x, y = as_point(x), as_point(y)
    _require_inside(P, x, y)
    return _visible_unchecked(P, x, y)


def _visible_unchecked(P: Polygon, x: np.ndarray, y: np.ndarray) -> bool:
    d = y - x
    if math.hypot(*d) <= P.tol:
        return True
    ts = _contacts(P, x, d)
    ts = ts[(ts > 0.0) & (ts < 1.0)]
    ts = np.unique(np.concatenate([[0.0, 1.0], ts]))
    mids = 0.5 * (ts[:-1] + ts[1:])
    gaps = ts[1:] - ts[:-1]
    mids = mids[gaps > 1e-12]
    if len(mids) == 0:
        return True
    pts = x[None, :] + mids[:, None] * d[None, :]
    return bool(np.all(point_in_polygon_many(P, pts) >= 0))


def boundary_point(P: Polygon, x) -> BoundaryPoint:
    """Canonical boundary parameterisation of a point on (or nearest to) the boundary."""
    x = as_point(x)
    rel = x[None, :] - P.starts
    e = P.edge_vectors
    t = np.clip((rel * e).sum(axis=1) / (P.edge_lengths ** 2), 0.0, 1.0)
    diff = rel - t[:, None] * e
    dist = np.hypot(diff[:, 0], diff[:, 1])
    i = int(np.argmin(dist))
    ti = float(t[i])
    if ti * P.edge_lengths[i] <= P.tol:
        ti = 0.0
    if (1.0 - ti) * P.edge_lengths[i] <= P.tol:
        i, ti = (i + 1) % P.n, 0.0
    if ti == 0.0:
        coords = P.vertices[i]
    else:
        coords = P.vertices[i] + ti * e[i]
    return BoundaryPoint(i, ti, (float(coords[0]), float(coords[1])))


def vertex_point(P: Polygon, i: int) -> BoundaryPoint:
    i %= P.n
    v = P.vertices[i]
    return BoundaryPoint(i, 0.0, (float(v[0]), float(v[1])))


def ray_shoot(P: Polygon, origin, direction) -> BoundaryPoint:
    """First point where the ray from ``origin`` leaves P.

    Grazing contacts (for example passing through a reflex vertex with the
    interior on both sides) do not stop the ray.
    """
    o = as_point(origin)
    d = as_point(direction)
    norm = math.hypot(*d)
    if norm <= 1e-15 or not np.isfinite(norm):
        raise DegenerateDirection("ray direction is zero")
    d = d / norm
    ts = _contacts(P, o, d)
    ts = np.unique(ts[ts > P.tol])
    if len(ts) == 0:
        raise PointOutsidePolygon("ray does not meet the boundary; origin outside polygon?")
    step = 1e-6 * P.bbox_diag
    for k, t in enumerate(ts):
        nxt = ts[k + 1] if k + 1 < len(ts) else t + 2 * step
        probe = o + (t + min(step, 0.5 * (nxt - t))) * d
        if point_in_polygon_many(P, probe[None, :])[0] < 0:
            return boundary_point(P, o + t * d)
    return boundary_point(P, o + ts[-1] * d)


def is_reflex(P: Polygon, vertex_index: int) -> bool:
    """Interior angle exceeds pi (a left turn on the clockwise boundary)."""
    i = vertex_index % P.n
    return orientation(P.vertices[i - 1], P.vertices[i], P.vertices[(i + 1) % P.n], P.tol) > 0


def interior_cone(P: Polygon, bp: BoundaryPoint) -> tuple[float, float]:
    """Directions pointing into P from a boundary point.

    Returns ``(start, span)``: the cone sweeps counter-clockwise from angle
    ``start`` through ``span`` radians.
    """
    x = bp.xy
    if bp.t == 0.0:
        i = bp.edge_index
        prev = P.vertices[i - 1] - x
        nxt = P.vertices[(i + 1) % P.n] - x
    else:
        e = P.edge_vectors[bp.edge_index]
        prev, nxt = -e, e
    start = math.atan2(prev[1], prev[0])
    end = math.atan2(nxt[1], nxt[0])
    span = (end - start) % (2 * math.pi)
    if span == 0.0:
        span = 2 * math.pi
    return start, span


@dataclass(frozen=True, eq=False)
class Triangulation:
    triangles: tuple[tuple[int, int, int], ...]
    diagonals: tuple[tuple[int, int], ...]
    dual_tree: dict = field(repr=False)
    polygon: Polygon = field(repr=False)

    @cached_property
    def _corners(self) -> np.ndarray:
        V = self.polygon.vertices
        return np.array([[V[i], V[j], V[k]] for i, j, k in self.triangles])

    @cached_property
    def _paths(self) -> dict:
        return {}

    def containing(self, x) -> list[int]:
        """Indices of triangles whose closure contains x."""
        x = as_point(x)
        c = self._corners
        tol = self.polygon.tol
        out = []
        for k in range(3):
            p, q = c[:, k], c[:, (k + 1) % 3]
            e = q - p
            r = x[None, :] - p
            det = e[:, 0] * r[:, 1] - e[:, 1] * r[:, 0]
            ln = np.maximum(np.hypot(e[:, 0], e[:, 1]), 1e-300)
            out.append(det / ln)
        signed = np.stack(out, axis=1)
        # triangles are stored clockwise: inside means all signed distances <= tol
        ok = np.all(signed <= tol, axis=1)
        return [int(i) for i in np.nonzero(ok)[0]]

    def dual_path(self, src: int, dst: int) -> list[int]:
        parents = self._paths.get(dst)
        if parents is None:
            parents = {dst: None}
            queue = deque([dst])
            while queue:
                t = queue.popleft()
                for nb, _ in self.dual_tree[t]:
                    if nb not in parents:
                        parents[nb] = t
                        queue.append(nb)
            self._paths[dst] = parents
        path = [src]
        while path[-1] != dst:
            path.append(parents[path[-1]])
        return path

    def shared_diagonal(self, t1: int, t2: int) -> tuple[int, int]:
        for nb, diag in self.dual_tree[t1]:
            if nb == t2:
                return diag
        raise KeyError((t1, t2))


def _point_in_closed_triangle(p, a, b, c, tol) -> bool:
    # a, b, c clockwise
    for u, v in ((a, b), (b, c), (c, a)):
        e = v - u
        if cross(e, p - u) / math.hypot(*e) > tol:
            return False
    return True


def triangulate(P: Polygon) -> Triangulation:
    """Ear-clipping triangulation with its dual tree."""
    V = P.vertices
    tol = P.tol
    remaining = list(range(P.n))
    triangles = []
    while len(remaining) > 3:
        m = len(remaining)
        found = None
        for k in range(m):
            i, j, l = remaining[k - 1], remaining[k], remaining[(k + 1) % m]
            if orientation(V[i], V[j], V[l], tol) >= 0:
                continue
            blocked = False
            for o in remaining:
                if o in (i, j, l):
                    continue
                if any(math.dist(V[o], V[w]) <= tol for w in (i, j, l)):
                    continue
                if _point_in_closed_triangle(V[o], V[i], V[j], V[l], tol):
                    blocked = True
                    break
            if not blocked:
                found = k
                break
        if found is None:
            raise RuntimeError("ear clipping failed; polygon is numerically degenerate")
        k = found
        triangles.append((remaining[k - 1], remaining[k], remaining[(k + 1) % m]))
        del remaining[k]
    triangles.append(tuple(remaining))

    n = P.n
    boundary = {frozenset((i, (i + 1) % n)) for i in range(n)}
    owner: dict = {}
    dual: dict = {t: [] for t in range(len(triangles))}
    diagonals = []
    for t, tri in enumerate(triangles):
        for u, v in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            key = frozenset((u, v))
            if key in boundary:
                continue
            if key in owner:
                other = owner[key]
                diag = (min(u, v), max(u, v))
                dual[t].append((other, diag))
                dual[other].append((t, diag))
                diagonals.append(diag)
            else:
                owner[key] = t
    dual = {t: tuple(v) for t, v in dual.items()}
    return Triangulation(tuple(triangles), tuple(sorted(diagonals)), dual, P)


def _component(T: Triangulation, start: int, active: set, banned: tuple[int, int]) -> set:
    seen = {start}
    stack = [start]
    while stack:
        t = stack.pop()
        for nb, _ in T.dual_tree[t]:
            if nb in active and nb not in seen and {t, nb} != set(banned):
                seen.add(nb)
                stack.append(nb)
    return seen


def split_at(T: Triangulation, active, diagonal) -> tuple[set, set]:
    """The two active components on either side of a diagonal.

    The first set is the one on the left of the directed diagonal
    ``diagonal[0] -> diagonal[1]``.
    """
    active = set(active)
    V = T.polygon.vertices
    i, j = diagonal
    pair = [t for t in active if i in T.triangles[t] and j in T.triangles[t]]
    pair = [t for t in pair if any(nb in pair and d == (min(i, j), max(i, j)) for nb, d in T.dual_tree[t])]
    if len(pair) != 2:
        raise ValueError(f"diagonal {diagonal} is not interior to the active set")
    t1, t2 = pair
    c1 = _component(T, t1, active, (t1, t2))
    c2 = active - c1
    k = next(v for v in T.triangles[t1] if v not in (i, j))
    if orientation(V[i], V[j], V[k]) > 0:
        return c1, c2
    return c2, c1


def balanced_diagonal(T: Triangulation, active_triangles) -> tuple[int, int]:
    """A diagonal of the active subtree whose larger side is as small as possible."""
    active = set(active_triangles)
    if len(active) < 2:
        raise SingleTriangle("active set is a single triangle")
    best = None
    for t in sorted(active):
        for nb, diag in T.dual_tree[t]:
            if nb not in active or nb < t:
                continue
            side = len(_component(T, t, active, (t, nb)))
            worst = max(side, len(active) - side)
            key = (worst, diag)
            if best is None or key < best:
                best = key
    return best[1]


def chord_through(P: Polygon, x, direction) -> PolyChord:
    """The chord along a line through interior point x, stopping at the first boundary contacts.

    Unlike ``ray_shoot`` a grazing contact ends the chord, so the open
    segment always lies strictly inside P.
    """
    o = as_point(x)
    d = as_point(direction)
    norm = math.hypot(*d)
    if norm <= 1e-15 or not np.isfinite(norm):
        raise DegenerateDirection("chord direction is zero")
    d = d / norm
    ts = _contacts(P, o, d)
    fwd = ts[ts > P.tol]
    bwd = ts[ts < -P.tol]
    if len(fwd) == 0 or len(bwd) == 0:
        raise PointOutsidePolygon("line does not meet the boundary on both sides of x")
    a = boundary_point(P, o + float(bwd.max()) * d)
    b = boundary_point(P, o + float(fwd.min()) * d)
    return PolyChord(a, b)
