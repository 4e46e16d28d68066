"""Radius function on a chord K, its minimiser, and the side test.

The radius function r(x) = max_H d(x, H) restricted to a chord K = ab is
the upper envelope of a coarse cover: pieces (interval, function, H) built
from shortest path trees rooted at a and at b, one pair of trees per side of
K.  Every piece is zero, a point distance plus a constant, or the distance
to the line through a chord.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyCover, ZeroRadius
from .geometry import (
    EPS_GEOM,
    BoundaryPoint,
    PolyChord,
    Polygon,
    Triangulation,
    as_point,
    boundary_point,
    cross,
    interior_cone,
    triangulate,
    vertex_point,
)
from .halfpolygon import HalfPolygon, contains_point
from .shortest_path import ROOT, augment_to_half_polygons, spt_from_boundary

EPS_TIE = 1e-7
_ACTIVE = 1e-11


class CaseTag(enum.Enum):
    CASE0 = "Case0"
    A_SIDE = "ASide"
    B_SIDE = "BSide"
    CENTRAL = "Central"
    TRAPEZOID = "Trapezoid"


class FuncKind(enum.Enum):
    ZERO = "Zero"
    VERTEX = "VertexDist"
    LINE = "LineDist"


@dataclass(frozen=True, eq=False)
class CoverFunc:
    """f(x) = 0, |x - apex| + kappa, or |normal . x - offset|."""

    kind: FuncKind
    apex: np.ndarray | None = None
    kappa: float = 0.0
    # direction of the path leaving the apex (used when x sits on the apex)
    via: np.ndarray | None = None
    normal: np.ndarray | None = None
    offset: float = 0.0

    def value(self, x) -> float:
        x = as_point(x)
        if self.kind is FuncKind.ZERO:
            return 0.0
        if self.kind is FuncKind.VERTEX:
            return math.hypot(*(x - self.apex)) + self.kappa
        return abs(float(self.normal @ x) - self.offset)

    def first_vector(self, x, tol: float) -> np.ndarray | None:
        x = as_point(x)
        if self.kind is FuncKind.VERTEX:
            d = self.apex - x
            n = math.hypot(*d)
            if n > tol:
                return d / n
            return None if self.via is None else self.via / math.hypot(*self.via)
        if self.kind is FuncKind.LINE:
            s = float(self.normal @ x) - self.offset
            return self.normal.copy() if s < 0 else -self.normal
        return None

    @staticmethod
    def zero() -> "CoverFunc":
        return CoverFunc(FuncKind.ZERO)

    @staticmethod
    def vertex(apex, kappa: float, via=None) -> "CoverFunc":
        return CoverFunc(FuncKind.VERTEX, apex=as_point(apex).copy(), kappa=float(kappa),
                         via=None if via is None else as_point(via).copy())

    @staticmethod
    def line(normal, offset: float) -> "CoverFunc":
        nrm = as_point(normal)
        ln = math.hypot(*nrm)
        return CoverFunc(FuncKind.LINE, normal=nrm / ln, offset=float(offset) / ln)


@dataclass(frozen=True, eq=False)
class CoarseCoverElement:
    lo: float
    hi: float
    func: CoverFunc
    half_id: int
    case_tag: CaseTag

    @property
    def interval(self) -> tuple[float, float]:
        return self.lo, self.hi


@dataclass(frozen=True, eq=False)
class FarthestInfo:
    radius: float
    farthest_ids: frozenset
    first_vectors: tuple
    elements: tuple = field(default=(), repr=False)


class SideDecision(enum.Enum):
    REL_CENTER_LEFT = "RelCenterLeft"
    REL_CENTER_RIGHT = "RelCenterRight"
    IS_REL_CENTER_CENTER_LEFT = "IsRelCenter_CenterLeftOfK"
    IS_REL_CENTER_CENTER_RIGHT = "IsRelCenter_CenterRightOfK"
    IS_GEODESIC_CENTER = "IsGeodesicCenter"
    IS_CENTER_SEGMENT = "IsCenterSegment"


class Side(enum.Enum):
    LEFT = "Left"
    RIGHT = "Right"
    ON_CHORD = "OnChord"


class ChordFrame:
    """Parameterisation x(t) = a + t (b - a), t in [0, 1]."""

    def __init__(self, K: PolyChord, scale: float):
        self.K = K
        self.a = K.a.xy
        self.b = K.b.xy
        self.d = self.b - self.a
        self.length = math.hypot(*self.d)
        self.e = self.d / self.length
        self.scale = scale

    def point(self, t: float) -> np.ndarray:
        return self.a + t * self.d

    def param(self, x) -> float:
        return float((as_point(x) - self.a) @ self.d) / (self.length ** 2)

    def line_param(self, origin, direction) -> float:
        """Parameter where the line through origin with the given direction meets K's line."""
        o, u = as_point(origin), as_point(direction)
        den = cross(u, self.d)
        if abs(den) <= 1e-12 * math.hypot(*u) * self.length:
            return min(1.0, max(0.0, self.param(o)))
        t = cross(u, o - self.a) / den
        return min(1.0, max(0.0, t))

    def side_of(self, x) -> int:
        c = cross(self.d, as_point(x) - self.a)
        tol = EPS_GEOM * self.scale * self.length
        return 0 if abs(c) <= tol else (1 if c > 0 else -1)


# ---------------------------------------------------------------- splitting


def split_polygon(P: Polygon, K: PolyChord):
    """The two sub-polygons cut off by K, as (polygon, index of a, index of b).

    The first is the piece left of a -> b (holding the clockwise arc a..b).
    """
    n = P.n
    out = []
    for start, end in ((K.a, K.b), (K.b, K.a)):
        span = (end.s - start.s) % n
        pts = [start.xy]
        for k in range(1, n + 1):
            i = (start.edge_index + k) % n
            off = (i - start.s) % n
            if off <= 0.0:
                continue
            if off >= span:
                break
            pts.append(P.vertices[i])
        pts.append(end.xy)
        sub = Polygon(np.array(pts), P.bbox_diag)
        if start is K.a:
            out.append((sub, 0, len(pts) - 1))
        else:
            out.append((sub, len(pts) - 1, 0))
    return out


def _on_left_arc(P: Polygon, K: PolyChord, s: float) -> bool:
    n = P.n
    return (s - K.a.s) % n < (K.b.s - K.a.s) % n


@dataclass
class _SideJob:
    polygon: Polygon
    ia: int
    ib: int
    halves: list = field(default_factory=list)  # (hid, half in sub-polygon, original H)
    fake: dict = field(default_factory=dict)  # hid -> ("A"|"B", crossing param, crossing point)


def _segment_line_param(frame: ChordFrame, p, q) -> float | None:
    """Parameter on K's line where segment pq crosses it, or None."""
    p, q = as_point(p), as_point(q)
    sp = cross(frame.d, p - frame.a)
    sq = cross(frame.d, q - frame.a)
    if sp == sq:
        return None
    w = sp / (sp - sq)
    x = p + w * (q - p)
    return frame.param(x)


def _assign(P: Polygon, K: PolyChord, frame: ChordFrame, H_sorted, jobs):
    """Distribute half-polygons to the two sides; returns Case 0 elements."""
    case0 = []
    for H in H_sorted:
        a_in = contains_point(H, frame.a)
        b_in = contains_point(H, frame.b)
        if a_in and b_in:
            case0.append(CoarseCoverElement(0.0, 1.0, CoverFunc.zero(), H.id, CaseTag.CASE0))
            continue
        if not a_in and not b_in:
            side = 0 if _on_left_arc(P, K, H.p.s) else 1
            job = jobs[side]
            sub = _rehome(job.polygon, H.p.xy, H.q.xy, H.id)
            job.halves.append((H.id, sub, H))
            continue
        p, q = H.chord
        tx = _segment_line_param(frame, p, q)
        if tx is None:
            tx = 0.0 if a_in else 1.0
        tx = min(1.0, max(0.0, tx))
        px = frame.point(tx)
        outside_end = frame.b if a_in else frame.a
        if a_in:
            case0.append(CoarseCoverElement(0.0, tx, CoverFunc.zero(), H.id, CaseTag.CASE0))
        else:
            case0.append(CoarseCoverElement(tx, 1.0, CoverFunc.zero(), H.id, CaseTag.CASE0))
        # the part of h making an acute angle with the outside half of K wins
        best = None
        for e in (p, q):
            if math.dist(e, px) <= P.tol:
                continue
            side = frame.side_of(e)
            if side == 0:
                continue
            score = float((e - px) @ (outside_end - px))
            if best is None or score > best[0]:
                best = (score, e, side)
        if best is None:
            continue
        _, e, side = best
        job = jobs[0 if side > 0 else 1]
        sub = _crossing_half(job.polygon, px, e, outside_end, H.id)
        job.halves.append((H.id, sub, H))
        job.fake[H.id] = ("A" if a_in else "B", tx, px)
    return case0


def _rehome(Q: Polygon, p, q, hid) -> HalfPolygon:
    return HalfPolygon(boundary_point(Q, p), boundary_point(Q, q), hid, Q)


def _crossing_half(Q: Polygon, px, e, outside_end, hid) -> HalfPolygon:
    bp, be = boundary_point(Q, px), boundary_point(Q, e)
    h1 = HalfPolygon(bp, be, hid, Q)
    if not contains_point(h1, outside_end):
        return h1
    return HalfPolygon(be, bp, hid, Q)


# ------------------------------------------------------------- tree build


@dataclass
class _Tree:
    pos: dict
    parent: dict
    direction: dict
    terminal: dict  # hid -> key
    override: dict  # key -> fixed parameter on K


def _tree(Q: Polygon, TQ: Triangulation, root_idx: int, other_idx: int, halves, fake,
          me: str, frame: ChordFrame) -> _Tree:
    root = vertex_point(Q, root_idx)
    real = [(hid, h) for hid, h, _ in halves if not (hid in fake and fake[hid][0] == me)]
    real.sort(key=lambda item: ((item[1].p.s - root.s) % Q.n, item[0]))
    spt = spt_from_boundary(Q, TQ, root)
    aug = augment_to_half_polygons(Q, TQ, spt, [h for _, h in real])
    other = "B" if me == "A" else "A"

    def rename(k):
        if k == ROOT:
            return me
        if k == ("v", other_idx):
            return other
        return k

    pos = {rename(k): v for k, v in aug.pos.items()}
    parent = {rename(k): (None if p is None else rename(p)) for k, p in aug.parent.items()}
    direction = {rename(k): v for k, v in aug.direction.items()}
    terminal = {hid: rename(k) for hid, k in aug.terminal.items()}
    override = {}
    for hid, h, _ in halves:
        if hid in fake and fake[hid][0] == me:
            _, tx, px = fake[hid]
            ek, tk = ("e", hid), ("t", hid)
            pos[ek] = px
            parent[ek] = me
            d = px - pos[me]
            nd = math.hypot(*d)
            direction[ek] = d / nd if nd > 0 else h.normal()
            pos[tk] = px
            parent[tk] = ek
            direction[tk] = h.normal()
            terminal[hid] = tk
            override[ek] = tx
    return _Tree(pos, parent, direction, terminal, override)


def _unify(ta: _Tree, tb: _Tree, tol: float) -> None:
    """Give terminal and chord-endpoint nodes shared keys only when they coincide."""
    for tree, tag in ((ta, "a"), (tb, "b")):
        tree._tag = tag
    keys = {k for k in list(ta.pos) + list(tb.pos) if isinstance(k, tuple) and k[0] in ("e", "t")}
    ren_a, ren_b = {}, {}
    for k in keys:
        pa, pb = ta.pos.get(k), tb.pos.get(k)
        if pa is not None and pb is not None and math.dist(pa, pb) <= tol:
            continue
        if pa is not None:
            ren_a[k] = (k[0] + "a", k[1])
        if pb is not None:
            ren_b[k] = (k[0] + "b", k[1])
    for tree, ren in ((ta, ren_a), (tb, ren_b)):
        if not ren:
            continue
        f = lambda k: ren.get(k, k)
        tree.pos = {f(k): v for k, v in tree.pos.items()}
        tree.parent = {f(k): (None if p is None else f(p)) for k, p in tree.parent.items()}
        tree.direction = {f(k): v for k, v in tree.direction.items()}
        tree.terminal = {h: f(k) for h, k in tree.terminal.items()}
        tree.override = {f(k): v for k, v in tree.override.items()}


def _farthest_leaf(tree: _Tree):
    """ell(u) and F(u): longest directed path from u down to a terminal, and that terminal's H."""
    term_of = {k: h for h, k in tree.terminal.items()}
    children = {k: [] for k in tree.pos}
    for k, p in tree.parent.items():
        if p is not None:
            children[p].append(k)
    ell, far = {}, {}
    order = []
    stack = [k for k, p in tree.parent.items() if p is None]
    while stack:
        k = stack.pop()
        order.append(k)
        stack.extend(children[k])
    for u in reversed(order):
        best = (0.0, term_of[u]) if u in term_of else (-math.inf, None)
        for v in children[u]:
            if ell[v] == -math.inf:
                continue
            cand = math.dist(tree.pos[u], tree.pos[v]) + ell[v]
            if cand > best[0] or (cand == best[0] and best[1] is not None and far[v] < best[1]):
                best = (cand, far[v])
        ell[u], far[u] = best
    return ell, far


def _x_on_chord(tree: _Tree, u, root: str, frame: ChordFrame) -> float:
    root_t = 0.0 if root == "A" else 1.0
    if u == root:
        return root_t
    if u in tree.override:
        return tree.override[u]
    if tree.parent.get(u) == root:
        return root_t
    return frame.line_param(tree.pos[u], tree.direction[u])


def _side_cover(job: _SideJob, frame: ChordFrame, tol: float) -> list:
    Q = job.polygon
    TQ = triangulate(Q)
    ta = _tree(Q, TQ, job.ia, job.ib, job.halves, job.fake, "A", frame)
    tb = _tree(Q, TQ, job.ib, job.ia, job.halves, job.fake, "B", frame)
    _unify(ta, tb, tol)
    ell_a, far_a = _farthest_leaf(ta)
    ell_b, far_b = _farthest_leaf(tb)

    def visible(u) -> bool:
        if u in ("A", "B"):
            return True
        if u not in ta.parent or u not in tb.parent:
            return True
        return ta.parent[u] != tb.parent[u]

    out = []
    for tree, ell, far, root, tag in ((ta, ell_a, far_a, "A", CaseTag.A_SIDE),
                                      (tb, ell_b, far_b, "B", CaseTag.B_SIDE)):
        for v, u in tree.parent.items():
            if u is None or u == root or ell[v] == -math.inf:
                continue
            if not (visible(u) and visible(v)):
                continue
            lo = _x_on_chord(tree, u, root, frame)
            hi = _x_on_chord(tree, v, root, frame)
            kappa = math.dist(tree.pos[u], tree.pos[v]) + ell[v]
            f = CoverFunc.vertex(tree.pos[u], kappa, tree.direction[v])
            out.append(CoarseCoverElement(min(lo, hi), max(lo, hi), f, far[v], tag))
    # central triangles: edges shared by both trees, from a visible node to a hidden one
    for v, u in ta.parent.items():
        if u is None or v not in tb.parent or tb.parent[v] != u:
            continue
        if not visible(u) or visible(v) or ell_a[v] == -math.inf:
            continue
        lo = _x_on_chord(ta, u, "A", frame)
        hi = _x_on_chord(tb, u, "B", frame)
        kappa = math.dist(ta.pos[u], ta.pos[v]) + max(ell_a[v], ell_b[v])
        f = CoverFunc.vertex(ta.pos[u], kappa, ta.direction[v])
        hid = far_a[v] if ell_a[v] >= ell_b[v] else far_b[v]
        out.append(CoarseCoverElement(min(lo, hi), max(lo, hi), f, hid, CaseTag.CENTRAL))
    # central trapezoids: distinct terminals on the same chord
    originals = {hid: h for hid, h, _ in job.halves}
    for hid, h in originals.items():
        ka, kb = ta.terminal.get(hid), tb.terminal.get(hid)
        if ka is None or kb is None:
            continue
        if ka == kb and _at_chord_end(h, ta.pos[ka], tol):
            continue  # a shared endpoint terminal is covered by the vertex elements
        # a shared perpendicular foot: the trapezoid collapses onto K but still covers it
        lo = _x_on_chord(ta, ka, "A", frame)
        hi = _x_on_chord(tb, kb, "B", frame)
        nrm = h.normal()
        f = CoverFunc.line(nrm, float(nrm @ h.p.xy))
        out.append(CoarseCoverElement(min(lo, hi), max(lo, hi), f, hid, CaseTag.TRAPEZOID))
    return out


def _at_chord_end(h: HalfPolygon, x, tol: float) -> bool:
    p, q = h.chord
    return min(math.dist(x, p), math.dist(x, q)) <= tol


def build_coarse_cover(P: Polygon, T: Triangulation | None, K: PolyChord, H_sorted) -> list:
    """Pieces whose upper envelope on K is the radius function r(x, H)."""
    frame = ChordFrame(K, P.bbox_diag)
    (QL, la, lb), (QR, ra, rb) = split_polygon(P, K)
    jobs = [_SideJob(QL, la, lb), _SideJob(QR, ra, rb)]
    cover = _assign(P, K, frame, H_sorted, jobs)
    for job in jobs:
        if job.halves:
            cover.extend(_side_cover(job, frame, P.tol))
    return cover


# ---------------------------------------------------------- envelope search


def _covers(el: CoarseCoverElement, t: float, slack: float = 1e-9) -> bool:
    return el.lo - slack <= t <= el.hi + slack


def radius_on_chord(cover, t: float, frame: ChordFrame | None = None, tie: float | None = None,
                    point=None) -> FarthestInfo:
    """Upper envelope at parameter t, with the farthest set and first path vectors."""
    if point is None:
        point = frame.point(t)
    x = as_point(point)
    scale = frame.scale if frame is not None else 1.0
    tie = EPS_TIE * scale if tie is None else tie
    vals = [(el, el.func.value(x)) for el in cover if _covers(el, t)]
    if not vals:
        return FarthestInfo(0.0, frozenset(), (), ())
    radius = max(v for _, v in vals)
    if radius <= tie:
        return FarthestInfo(max(radius, 0.0), frozenset(), (), ())
    near = [(el, v) for el, v in vals if v >= radius - tie and el.func.kind is not FuncKind.ZERO]
    vectors = []
    for el, _ in near:
        vec = el.func.first_vector(x, EPS_GEOM * scale)
        if vec is None:
            continue
        if all(math.hypot(*(vec - w)) > 1e-9 for w in vectors):
            vectors.append(vec)
    return FarthestInfo(radius, frozenset(el.half_id for el, _ in near), tuple(vectors),
                        tuple(el for el, _ in near))


class _ChordFunc:
    """A cover function written in arc length s along K."""

    def __init__(self, el: CoarseCoverElement, frame: ChordFrame):
        self.el = el
        f = el.func
        self.kind = f.kind
        L = frame.length
        self.L = L
        if f.kind is FuncKind.VERTEX:
            rel = f.apex - frame.a
            self.c = float(rel @ frame.e)
            self.h = abs(cross(frame.e, rel))
            self.k = f.kappa
        elif f.kind is FuncKind.LINE:
            self.alpha = float(f.normal @ frame.e)
            self.beta = float(f.normal @ frame.a) - f.offset

    def value(self, s: float) -> float:
        if self.kind is FuncKind.VERTEX:
            return math.hypot(s - self.c, self.h) + self.k
        if self.kind is FuncKind.LINE:
            return abs(self.alpha * s + self.beta)
        return 0.0

    def slope(self, s: float, right: bool) -> float:
        if self.kind is FuncKind.VERTEX:
            r = math.hypot(s - self.c, self.h)
            if r <= 1e-15 * max(1.0, self.L):
                return 1.0 if right else -1.0
            return (s - self.c) / r
        if self.kind is FuncKind.LINE:
            g = self.alpha * s + self.beta
            if abs(g) <= 1e-15 * max(1.0, self.L):
                return abs(self.alpha) if right else -abs(self.alpha)
            return self.alpha if g > 0 else -self.alpha
        return 0.0

    def argmin(self, lo: float, hi: float) -> float:
        if self.kind is FuncKind.VERTEX:
            return min(hi, max(lo, self.c))
        if self.kind is FuncKind.LINE and self.alpha != 0.0:
            return min(hi, max(lo, -self.beta / self.alpha))
        return lo


def _crossings(f: _ChordFunc, g: _ChordFunc) -> list:
    """Arc-length parameters where the extended functions f and g agree."""
    if f.kind is FuncKind.ZERO and g.kind is FuncKind.ZERO:
        return []
    if f.kind is FuncKind.ZERO or g.kind is FuncKind.ZERO:
        h = g if f.kind is FuncKind.ZERO else f
        if h.kind is FuncKind.LINE:
            return [-h.beta / h.alpha] if h.alpha != 0 else []
        return [h.c] if h.h == 0 and h.k == 0 else []
    if f.kind is FuncKind.LINE and g.kind is FuncKind.LINE:
        out = []
        for sg in (1.0, -1.0):
            den = f.alpha - sg * g.alpha
            if den != 0:
                out.append((sg * g.beta - f.beta) / den)
        return out
    if f.kind is FuncKind.LINE:
        f, g = g, f
    roots = []
    if g.kind is FuncKind.LINE:
        # sqrt((s-c)^2 + h^2) + k = sg (alpha s + beta)
        for sg in (1.0, -1.0):
            al, be = sg * g.alpha, sg * g.beta - f.k
            A = 1.0 - al * al
            B = -2.0 * f.c - 2.0 * al * be
            C = f.c * f.c + f.h * f.h - be * be
            roots += _quadratic(A, B, C)
    else:
        # sqrt(A1) = sqrt(A2) + D with D = k2 - k1
        D = g.k - f.k
        m = 2.0 * (g.c - f.c)
        kk = f.c * f.c - g.c * g.c + f.h * f.h - g.h * g.h - D * D
        if D == 0.0:
            roots = [-kk / m] if m != 0 else []
        else:
            A = m * m - 4 * D * D
            B = 2 * m * kk + 8 * D * D * g.c
            C = kk * kk - 4 * D * D * (g.c * g.c + g.h * g.h)
            roots = _quadratic(A, B, C)
    return [s for s in roots if abs(f.value(s) - g.value(s)) <= 1e-7 * (1.0 + abs(f.value(s)))]


def _quadratic(A: float, B: float, C: float) -> list:
    scale = max(abs(A), abs(B), abs(C))
    if scale == 0.0:
        return []
    if abs(A) <= 1e-14 * scale:
        return [-C / B] if B != 0 else []
    disc = B * B - 4 * A * C
    if disc < 0:
        if disc > -1e-12 * B * B:
            disc = 0.0
        else:
            return []
    r = math.sqrt(disc)
    q = -0.5 * (B + math.copysign(r, B)) if B != 0 else -0.5 * r
    out = []
    if q != 0:
        out.append(q / A)
        out.append(C / q)
    else:
        out.append(0.0)
    return out


def _slopes(funcs, s: float, lo_end: bool, hi_end: bool, eps: float):
    """One-sided slopes (left, right) of the envelope at s."""
    right = [f for f in funcs if f.s_lo - eps <= s < f.s_hi - eps]
    left = [f for f in funcs if f.s_lo + eps < s <= f.s_hi + eps]

    def side(group, is_right):
        if not group:
            return None
        vals = [f.value(s) for f in group]
        top = max(vals)
        act = [f for f, v in zip(group, vals) if v >= top - eps]
        sl = [f.slope(s, is_right) for f in act]
        return max(sl) if is_right else min(sl)

    dp = math.inf if hi_end else side(right, True)
    dm = -math.inf if lo_end else side(left, False)
    if dp is None:
        dp = math.inf
    if dm is None:
        dm = -math.inf
    return dm, dp


def _search(funcs, points, L, eps):
    """Locate the minimiser of the envelope among sorted breakpoints.

    Returns (s, None) when a breakpoint is the minimiser, or (None, (s0, s1))
    when it lies strictly between two consecutive breakpoints.
    """
    lo, hi = 0, len(points) - 1
    # smallest k with right slope >= 0
    while lo < hi:
        mid = (lo + hi) // 2
        _, dp = _slopes(funcs, points[mid], points[mid] <= 0.0, points[mid] >= L, eps)
        if dp >= -1e-12:
            hi = mid
        else:
            lo = mid + 1
    k = lo
    dm, _ = _slopes(funcs, points[k], points[k] <= 0.0, points[k] >= L, eps)
    if k == 0 or dm <= 1e-12:
        return points[k], None
    return None, (points[k - 1], points[k])


def relative_center(P: Polygon, T: Triangulation | None, K: PolyChord, H_sorted, cover=None):
    """Minimiser c_K of r(x, H) over x in K, with its farthest information.

    Returns ``(c_K, t, info, cover)`` where t is the parameter of c_K.
    """
    frame = ChordFrame(K, P.bbox_diag)
    if cover is None:
        cover = build_coarse_cover(P, T, K, H_sorted)
    if not H_sorted or not cover:
        raise EmptyCover("no half-polygons; the radius is 0 everywhere")
    t = minimize_envelope(cover, frame)
    c = frame.point(t)
    info = radius_on_chord(cover, t, frame)
    return c, t, info, cover


def minimize_envelope(cover, frame: ChordFrame) -> float:
    L = frame.length
    eps = _ACTIVE * frame.scale
    funcs = []
    for el in cover:
        f = _ChordFunc(el, frame)
        f.s_lo, f.s_hi = el.lo * L, el.hi * L
        funcs.append(f)
    pts = sorted({0.0, L} | {min(L, max(0.0, f.s_lo)) for f in funcs} | {min(L, max(0.0, f.s_hi)) for f in funcs})
    s, bracket = _search(funcs, pts, L, eps)
    if bracket is None:
        return s / L
    s0, s1 = bracket
    mid = 0.5 * (s0 + s1)
    live = [f for f in funcs if f.s_lo - eps <= s0 and f.s_hi + eps >= s1]
    inner = {s0, s1}
    for i in range(len(live)):
        for j in range(i + 1, len(live)):
            for r in _crossings(live[i], live[j]):
                if s0 < r < s1:
                    inner.add(r)
    pts = sorted(inner)
    s, sub = _search(live, pts, L, eps)
    if sub is None:
        return s / L
    a0, a1 = sub
    m = 0.5 * (a0 + a1)
    top = max(live, key=lambda f: f.value(m))
    return top.argmin(a0, a1) / L


# -------------------------------------------------------------- wedge test


def _angle(v) -> float:
    return math.atan2(v[1], v[0])


def wedge_angle(vectors) -> tuple[float, float]:
    """Smallest wedge containing all vectors: (alpha, bisector angle)."""
    angs = sorted(_angle(v) % (2 * math.pi) for v in vectors)
    if len(angs) == 1:
        return 0.0, angs[0]
    gaps = [(angs[(i + 1) % len(angs)] - angs[i]) % (2 * math.pi) for i in range(len(angs))]
    i = int(np.argmax(gaps))
    alpha = 2 * math.pi - gaps[i]
    start = angs[(i + 1) % len(angs)]
    return alpha, start + alpha / 2


def _arc_intersection(c1, w1, c2, w2):
    """Intersect angular intervals [c1, c1 + w1] and [c2, c2 + w2]; returns the widest piece."""
    best = None
    for shift in (-2 * math.pi, 0.0, 2 * math.pi):
        lo = max(c1, c2 + shift)
        hi = min(c1 + w1, c2 + shift + w2)
        if hi > lo and (best is None or hi - lo > best[1] - best[0]):
            best = (lo, hi)
    return best


def _rel(u, cstart: float, cwidth: float) -> float:
    """Angle of u measured counter-clockwise from the cone start, clamped into the cone."""
    r = (_angle(u) - cstart) % (2 * math.pi)
    if r > cwidth:
        # numerically just outside: snap to the nearer side of the cone
        r = cwidth if r - cwidth < 2 * math.pi - r else 0.0
    return r


def _slope(d_rel: float, rels) -> float:
    """Directional derivative of the radius along the direction at relative angle d_rel.

    Inside the cone the angle between two directions is their relative
    difference; a difference of pi or more means the path wraps around x.
    """
    return max(-math.cos(min(abs(d_rel - r), math.pi)) for r in rels)


def wedge_test(x, info: FarthestInfo, K: PolyChord | None, P: Polygon,
               boundary: BoundaryPoint | None = None, along_chord: bool = True) -> SideDecision:
    """Decide where the (relative) geodesic center lies from the farthest vectors at x.

    With ``along_chord`` the first question is whether moving along K
    decreases the radius (RelCenterLeft = toward a, RelCenterRight =
    toward b).  Otherwise, or if x is the relative center, the smallest
    wedge holding all vectors decides the side of K.  ``boundary`` is the
    boundary parameterisation of x when x lies on the polygon boundary;
    directions are then measured inside the interior cone.
    """
    if info.radius <= 0.0 or not info.first_vectors:
        raise ZeroRadius("radius is zero at this point")
    vecs = [np.asarray(v) / math.hypot(*v) for v in info.first_vectors]
    if boundary is not None:
        cstart, cwidth = interior_cone(P, boundary)
    else:
        cstart, cwidth = 0.0, 2 * math.pi
    at_a = boundary is not None and K is not None and _is_chord_end(boundary, K.a)
    at_b = boundary is not None and K is not None and _is_chord_end(boundary, K.b)
    if boundary is not None:
        rels = [_rel(v, cstart, cwidth) for v in vecs]
    if K is not None and along_chord:
        e = K.b.xy - K.a.xy
        e = e / math.hypot(*e)
        if boundary is not None:
            s_b = _slope(_rel(e, cstart, cwidth), rels) if not at_b else math.inf
            s_a = _slope(_rel(-e, cstart, cwidth), rels) if not at_a else math.inf
        else:
            s_b = max(-float(v @ e) for v in vecs)
            s_a = max(float(v @ e) for v in vecs)
        if s_b < -1e-9:
            return SideDecision.REL_CENTER_RIGHT
        if s_a < -1e-9:
            return SideDecision.REL_CENTER_LEFT
    if boundary is None:
        alpha, bis = wedge_angle(vecs)
        if alpha >= math.pi - 1e-9:
            if abs(alpha - math.pi) <= 1e-7 and _parallel_lines(info):
                return SideDecision.IS_CENTER_SEGMENT
            return SideDecision.IS_GEODESIC_CENTER
        ang = bis
    else:
        lo = max(max(rels) - math.pi / 2, 0.0)
        hi = min(min(rels) + math.pi / 2, cwidth)
        if hi - lo <= 1e-9:
            return SideDecision.IS_GEODESIC_CENTER
        d_rel = 0.5 * (lo + hi)
        ang = cstart + d_rel
    if K is None:
        raise ValueError("a chord is needed to name the side")
    e = K.b.xy - K.a.xy
    if at_a or at_b:
        # the chord splits the interior cone; compare relative angles
        kd = e if at_a else -e
        left_of_direction = d_rel > _rel(kd, cstart, cwidth)
        left = left_of_direction if at_a else not left_of_direction
    else:
        d = np.array([math.cos(ang), math.sin(ang)])
        left = cross(e, d) > 0
    return SideDecision.IS_REL_CENTER_CENTER_LEFT if left else SideDecision.IS_REL_CENTER_CENTER_RIGHT


def _is_chord_end(bp: BoundaryPoint, end: BoundaryPoint) -> bool:
    return math.dist(bp.coords, end.coords) <= 1e-12 * (1.0 + math.hypot(*bp.coords))


def _parallel_lines(info: FarthestInfo) -> bool:
    lines = [el.func for el in info.elements if el.func.kind is FuncKind.LINE]
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            if float(lines[i].normal @ lines[j].normal) <= -1 + 1e-9:
                return True
    return False


def _perpendicular_pair(x, info: FarthestInfo, H_sorted, tol: float) -> bool:
    """Two farthest halves reached straight along opposite chord normals: the center is a segment."""
    x = as_point(x)
    hits = []
    for h in H_sorted:
        if h.id not in info.farthest_ids:
            continue
        nrm = h.normal()
        gap = float((h.p.xy - x) @ nrm)
        if abs(gap - info.radius) <= tol and any(float(v @ nrm) >= 1 - 1e-9 for v in info.first_vectors):
            hits.append(nrm)
    return any(float(a @ b) <= -1 + 1e-9 for i, a in enumerate(hits) for b in hits[i + 1:])


@dataclass(frozen=True, eq=False)
class OracleAnswer:
    side: Side
    center: np.ndarray
    t: float
    info: FarthestInfo
    decision: SideDecision | None
    cover: tuple = field(repr=False, default=())


def chord_oracle(P: Polygon, T: Triangulation | None, K: PolyChord, H_sorted) -> OracleAnswer:
    """Which side of K holds the geodesic center of H, with the relative center c_K."""
    c, t, info, cover = relative_center(P, T, K, H_sorted)
    if info.radius <= EPS_TIE * P.bbox_diag or not info.first_vectors:
        return OracleAnswer(Side.ON_CHORD, c, t, info, None, tuple(cover))
    # within tolerance of an end the side must come from the boundary cone there:
    # past a reflex end the line of K runs on through the interior
    bp = None
    if t * K.length <= P.tol:
        bp = K.a
    elif (1.0 - t) * K.length <= P.tol:
        bp = K.b
    # c_K already minimises the envelope, so only the side question remains
    dec = wedge_test(c, info, K, P, bp, along_chord=False)
    if dec is SideDecision.IS_GEODESIC_CENTER and _perpendicular_pair(c, info, H_sorted, EPS_TIE * P.bbox_diag):
        # the perpendicular feet can lie on K itself, where the pieces are point distances
        dec = SideDecision.IS_CENTER_SEGMENT
    if dec is SideDecision.IS_REL_CENTER_CENTER_LEFT:
        side = Side.LEFT
    elif dec is SideDecision.IS_REL_CENTER_CENTER_RIGHT:
        side = Side.RIGHT
    else:
        side = Side.ON_CHORD
    return OracleAnswer(side, c, t, info, dec, tuple(cover))
