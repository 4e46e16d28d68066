"""Geodesic center of a set of half-polygons.

Pipeline: sort and filter the half-polygons, narrow the search to one
triangle of the triangulation with chord oracles on balanced diagonals,
refine the triangle by elimination lines until every half-polygon has a
fixed path structure, then solve the resulting Euclidean problem.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .chord_oracle import EPS_TIE, OracleAnswer, Side, SideDecision, chord_oracle
from .errors import EmptyConstraintSet, SingleTriangle
from .geometry import (
    Polygon,
    PolyChord,
    Triangulation,
    as_point,
    balanced_diagonal,
    chord_through,
    cross,
    split_at,
    triangulate,
    vertex_point,
)
from .halfpolygon import contains_point, sort_and_filter
from .lpdisk import HalfPlane, disk, half_plane, min_feasible_disk
from .shortest_path import (
    HitKind,
    augment_to_half_polygons,
    distance_to_half_polygon,
    spt_from_boundary,
)

log = logging.getLogger(__name__)


class Irrelevant:
    """The half-polygon contains the whole region."""

    def __init__(self, id: int):
        self.id = id

    def __repr__(self) -> str:
        return f"Irrelevant(id={self.id})"


@dataclass(frozen=True, eq=False)
class HomogeneousRegion:
    boundary: np.ndarray  # convex polygon, counter-clockwise
    witness: np.ndarray
    triangle: int
    oracle_calls: int = 0
    lines_tested: int = 0
    collapsed: OracleAnswer | None = None


@dataclass(frozen=True, eq=False)
class CenterResult:
    center: np.ndarray
    radius: float
    determining: tuple
    degenerate_segment: tuple | None = None
    degenerate_ties: bool = False
    oracle_calls: int = 0
    region: np.ndarray | None = field(default=None, repr=False)
    half_polygons: tuple = field(default=(), repr=False)


@dataclass(frozen=True, eq=False)
class LocateResult:
    triangle: int | None
    answer: OracleAnswer | None
    calls: int
    on_chord: bool = False


# ----------------------------------------------------------------- locate


def locate_triangle(P: Polygon, T: Triangulation, H_sorted) -> LocateResult:
    """A triangle of T holding a geodesic center, by oracle calls on balanced diagonals."""
    active = set(range(len(T.triangles)))
    last = None
    calls = 0
    while len(active) > 1:
        try:
            i, j = balanced_diagonal(T, active)
        except SingleTriangle:
            break
        K = PolyChord(vertex_point(P, i), vertex_point(P, j))
        ans = chord_oracle(P, T, K, H_sorted)
        calls += 1
        last = ans
        log.debug("diagonal (%d,%d): %s", i, j, ans.side.value)
        if ans.side is Side.ON_CHORD:
            return LocateResult(None, ans, calls, True)
        left, right = split_at(T, active, (i, j))
        active = left if ans.side is Side.LEFT else right
    return LocateResult(next(iter(active)), last, calls)


# ----------------------------------------------------------------- refine


def _line_key(p, d, scale):
    n = np.array([-d[1], d[0]])
    c = float(n @ p)
    if n[0] < -1e-12 or (abs(n[0]) <= 1e-12 and n[1] < 0):
        n, c = -n, -c
    q = 1e-9 * scale
    return (round(n[0] / 1e-9), round(n[1] / 1e-9), round(c / q))


def _crosses(region: np.ndarray, p, d, tol) -> bool:
    s = (region[:, 0] - p[0]) * d[1] - (region[:, 1] - p[1]) * d[0]
    return bool(s.max() > tol and s.min() < -tol)


def elimination_lines(P: Polygon, T: Triangulation, triangle: int, H_sorted) -> list:
    """Lines (point, unit direction) whose arrangement inside the triangle is homogeneous.

    One line per chord and two perpendiculars at its endpoints for every
    half-polygon, plus the extension of every edge of the shortest path
    trees from the triangle's corners.
    """
    tri = np.array([P.vertices[v] for v in T.triangles[triangle]])
    tol = P.tol
    lines = []
    for H in H_sorted:
        p, q = H.chord
        d = q - p
        d = d / math.hypot(*d)
        nrm = np.array([-d[1], d[0]])
        lines += [(p, d), (p, nrm), (q, nrm)]
    for v in T.triangles[triangle]:
        root = vertex_point(P, v)
        hs = [H for H in H_sorted if not contains_point(H, root.xy)]
        hs.sort(key=lambda H: ((H.p.s - root.s) % P.n, H.id))
        tree = augment_to_half_polygons(P, T, spt_from_boundary(P, T, root), hs)
        for k, par in tree.parent.items():
            if par is None:
                continue
            a, b = tree.pos[par], tree.pos[k]
            d = b - a
            if math.hypot(*d) <= tol:
                d = tree.direction[k]
            lines.append((a, d / math.hypot(*d)))
    seen, out = set(), []
    for p, d in lines:
        if not _crosses(tri, p, d, tol):
            continue
        key = _line_key(p, d, P.bbox_diag)
        if key in seen:
            continue
        seen.add(key)
        out.append((np.asarray(p, dtype=float), np.asarray(d, dtype=float)))
    return out


def clip_convex(region: np.ndarray, p, d, keep_left: bool) -> np.ndarray:
    """Intersect a convex polygon with the closed half-plane left (or right) of the line p + t d."""
    s = d[0] * (region[:, 1] - p[1]) - d[1] * (region[:, 0] - p[0])
    if not keep_left:
        s = -s
    out = []
    m = len(region)
    for i in range(m):
        a, b = region[i], region[(i + 1) % m]
        sa, sb = s[i], s[(i + 1) % m]
        if sa >= 0:
            out.append(a)
        if (sa > 0 and sb < 0) or (sa < 0 and sb > 0):
            w = sa / (sa - sb)
            out.append(a + w * (b - a))
    return np.array(out) if out else np.zeros((0, 2))


def _segment_in_region(region: np.ndarray, p, d):
    """Parameters range of the line p + t d inside the convex region."""
    lo, hi = -math.inf, math.inf
    m = len(region)
    for i in range(m):
        a, b = region[i], region[(i + 1) % m]
        e = b - a
        # region is counter-clockwise: inside is left of each edge
        num = cross(e, p - a)
        den = cross(e, d)
        if abs(den) <= 1e-15:
            continue
        t = -num / den
        if den > 0:
            lo = max(lo, t)
        else:
            hi = min(hi, t)
    return lo, hi


def refine_to_homogeneous(P: Polygon, T: Triangulation, triangle: int, H_sorted,
                          lines=None) -> HomogeneousRegion:
    """Cut the triangle by every elimination line that crosses it, keeping the oracle's side."""
    region = np.array([P.vertices[v] for v in T.triangles[triangle]])
    if cross(region[1] - region[0], region[2] - region[0]) < 0:
        region = region[::-1]
    if lines is None:
        lines = elimination_lines(P, T, triangle, H_sorted)
    calls = 0
    for p, d in lines:
        if not _crosses(region, p, d, P.tol):
            continue
        lo, hi = _segment_in_region(region, p, d)
        m = p + 0.5 * (lo + hi) * d
        K = chord_through(P, m, d)
        ans = chord_oracle(P, T, K, H_sorted)
        calls += 1
        if ans.side is Side.ON_CHORD:
            return HomogeneousRegion(region, ans.center, triangle, calls, len(lines), ans)
        # K runs along d, so "left of K" is left of d
        region = clip_convex(region, p, d, ans.side is Side.LEFT)
    return HomogeneousRegion(region, region.mean(axis=0), triangle, calls, len(lines))


# ----------------------------------------------------------- classify/solve


def classify_constraints(P: Polygon, T: Triangulation, region: HomogeneousRegion, H_sorted) -> list:
    """Per half-polygon: Irrelevant, HalfPlane (distance to the chord line) or Disk (apex + kappa)."""
    p = region.witness
    out = []
    for H in H_sorted:
        hit = distance_to_half_polygon(P, T, p, H)
        if hit.kind is HitKind.ALREADY_INSIDE or hit.distance <= P.tol:
            out.append(Irrelevant(H.id))
            continue
        wp = hit.path.waypoints
        if hit.kind is HitKind.INTERIOR_PERPENDICULAR and len(wp) == 2:
            nrm = H.normal()
            # outside H: distance = c - n.x with c = n.p
            out.append(half_plane(-nrm, -float(nrm @ H.p.xy), H.id))
        else:
            u = np.asarray(wp[1], dtype=float)
            out.append(disk(u, max(0.0, hit.distance - math.dist(p, u)), H.id))
    return out


def _inside_convex(region: np.ndarray, x, tol) -> bool:
    m = len(region)
    for i in range(m):
        a, b = region[i], region[(i + 1) % m]
        e = b - a
        if cross(e, x - a) < -tol * max(1.0, math.hypot(*e)):
            return False
    return True


def _golden(f, a, b, iters: int = 120):
    g = (math.sqrt(5) - 1) / 2
    lo, hi = 0.0, 1.0
    x1, x2 = hi - g * (hi - lo), lo + g * (hi - lo)
    f1, f2 = f(a + x1 * (b - a)), f(a + x2 * (b - a))
    for _ in range(iters):
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - g * (hi - lo)
            f1 = f(a + x1 * (b - a))
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + g * (hi - lo)
            f2 = f(a + x2 * (b - a))
    cands = [(f(a), a), (f(b), b), (f1, a + x1 * (b - a))]
    return min(cands, key=lambda c: c[0])


def _solve_in_region(cons, region: np.ndarray, witness, tol, seed):
    x, rho, basis = min_feasible_disk(cons, witness=witness, seed=seed)
    if _inside_convex(region, x, tol):
        return x, rho, basis
    # the unconstrained optimum left the region; the convex max is then
    # minimised on the region boundary
    F = lambda z: max(c.value(z) for c in cons)
    best = None
    m = len(region)
    for i in range(m):
        val, z = _golden(F, region[i], region[(i + 1) % m])
        if best is None or val < best[0]:
            best = (val, z)
    return best[1], best[0], []


def _radius_and_distances(P, T, x, H_sorted):
    d = {H.id: distance_to_half_polygon(P, T, x, H).distance for H in H_sorted}
    return max(d.values(), default=0.0), d


def _center_segment(P, T, x, normal, rho, H_sorted):
    """The segment of centers through x perpendicular to two parallel chords."""
    d = np.array([-normal[1], normal[0]])
    K = chord_through(P, x, d)
    tol = EPS_TIE * P.bbox_diag

    def ok(y):
        return _radius_and_distances(P, T, y, H_sorted)[0] <= rho + tol

    ends = []
    for far in (K.a.xy, K.b.xy):
        lo, hi = 0.0, 1.0
        if ok(x + 0.999999 * (far - x)):
            ends.append(x + 0.999999 * (far - x))
            continue
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if ok(x + mid * (far - x)):
                lo = mid
            else:
                hi = mid
        ends.append(x + lo * (far - x))
    return ends[0], ends[1]


def geodesic_center(P: Polygon, H_list, seed: int = 0, T: Triangulation | None = None) -> CenterResult:
    """Point minimising the maximum geodesic distance to the half-polygons."""
    Hs = sort_and_filter(list(H_list))
    if not Hs:
        raise EmptyConstraintSet("no half-polygons")
    if T is None:
        T = triangulate(P)
    tie = EPS_TIE * P.bbox_diag
    loc = locate_triangle(P, T, Hs)
    calls = loc.calls
    region = None
    segment_normal = None
    if loc.on_chord:
        x = loc.answer.center
        segment_normal = _parallel_normal(loc.answer)
    else:
        reg = refine_to_homogeneous(P, T, loc.triangle, Hs)
        calls += reg.oracle_calls
        region = reg.boundary
        if reg.collapsed is not None:
            x = reg.collapsed.center
            segment_normal = _parallel_normal(reg.collapsed)
        else:
            classified = classify_constraints(P, T, reg, Hs)
            cons = [c for c in classified if not isinstance(c, Irrelevant)]
            if not cons:
                return CenterResult(reg.witness, 0.0, (), None, False, calls, region, tuple(Hs))
            x, rho, basis = _solve_in_region(cons, reg.boundary, reg.witness, P.tol, seed)
            hps = [c for c in basis if isinstance(c, HalfPlane)]
            if len(basis) == 2 and len(hps) == 2 and float(hps[0].a @ hps[1].a) <= -1 + 1e-9:
                segment_normal = hps[0].a
    x = as_point(x).copy()
    radius, dists = _radius_and_distances(P, T, x, Hs)
    if radius <= tie:
        return CenterResult(x, 0.0, (), None, False, calls, region, tuple(Hs))
    tight = tuple(sorted(h for h, v in dists.items() if v >= radius - tie))
    segment = None
    if segment_normal is not None:
        s0, s1 = _center_segment(P, T, x, segment_normal, radius, Hs)
        if math.dist(s0, s1) > tie:
            segment = (s0, s1)
            x = 0.5 * (s0 + s1)
            radius, dists = _radius_and_distances(P, T, x, Hs)
            tight = tuple(sorted(h for h, v in dists.items() if v >= radius - tie))
    return CenterResult(x, radius, tight, segment, len(tight) > 3, calls, region, tuple(Hs))


def _parallel_normal(ans: OracleAnswer):
    if ans.decision is not SideDecision.IS_CENTER_SEGMENT:
        return None
    from .chord_oracle import FuncKind

    for el in ans.info.elements:
        if el.func.kind is FuncKind.LINE:
            return el.func.normal
    return np.asarray(ans.info.first_vectors[0]) if ans.info.first_vectors else None
