"""Brute-force oracles used to certify the solvers.

Nothing here calls the funnel, the chord oracle or the disk solver.  Geodesic
distances come from Dijkstra on the visibility graph of the polygon
vertices, with its own segment-in-polygon test; radii are minimised over a
grid of cell centres.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .errors import PointOutsidePolygon

_CHUNK = 4096


@dataclass(frozen=True)
class GridSpec:
    resolution: int
    bbox: tuple[float, float, float, float]

    def __post_init__(self):
        if self.resolution < 16:
            raise ValueError("grid resolution must be at least 16")

    @property
    def cell(self) -> tuple[float, float]:
        x0, y0, x1, y1 = self.bbox
        return (x1 - x0) / self.resolution, (y1 - y0) / self.resolution

    def centers(self, ii, jj) -> np.ndarray:
        x0, y0, _, _ = self.bbox
        cx, cy = self.cell
        return np.stack([x0 + (np.asarray(ii) + 0.5) * cx, y0 + (np.asarray(jj) + 0.5) * cy], axis=-1)

    def index_of(self, pt) -> tuple[int, int]:
        x0, y0, _, _ = self.bbox
        cx, cy = self.cell
        i = int(min(self.resolution - 1, max(0, math.floor((pt[0] - x0) / cx))))
        j = int(min(self.resolution - 1, max(0, math.floor((pt[1] - y0) / cy))))
        return i, j


def grid_for(P, resolution: int) -> GridSpec:
    V = np.asarray(P.vertices, dtype=float)
    lo, hi = V.min(axis=0), V.max(axis=0)
    return GridSpec(resolution, (float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])))


class _Poly:
    """Oracle-side view of a polygon: vertex array plus its own predicates."""

    def __init__(self, vertices):
        V = np.asarray(vertices, dtype=float)
        area2 = float(np.dot(V[:, 0], np.roll(V[:, 1], -1)) - np.dot(np.roll(V[:, 0], -1), V[:, 1]))
        if area2 > 0:
            V = V[::-1].copy()
        self.V = V
        self.n = len(V)
        self.A = V
        self.B = np.roll(V, -1, axis=0)
        self.diag = float(np.hypot(*(V.max(axis=0) - V.min(axis=0))))
        self.tol = 1e-9 * self.diag
        prev = np.roll(V, 1, axis=0)
        nxt = self.B
        turn = (V[:, 0] - prev[:, 0]) * (nxt[:, 1] - V[:, 1]) - (V[:, 1] - prev[:, 1]) * (nxt[:, 0] - V[:, 0])
        # clockwise storage: a left turn is a reflex corner
        self.reflex = turn > self.tol * self.diag

    def location(self, X) -> np.ndarray:
        """1 inside, 0 on boundary, -1 outside (crossing number with a boundary band)."""
        X = np.asarray(X, dtype=float).reshape(-1, 2)
        out = np.empty(len(X), dtype=int)
        for s in range(0, len(X), _CHUNK):
            out[s:s + _CHUNK] = self._location(X[s:s + _CHUNK])
        return out

    def _location(self, X):
        A, B = self.A, self.B
        E = B - A
        L2 = np.maximum((E ** 2).sum(1), 1e-300)
        rx = X[:, None, 0] - A[None, :, 0]
        ry = X[:, None, 1] - A[None, :, 1]
        t = np.clip((rx * E[:, 0] + ry * E[:, 1]) / L2, 0, 1)
        dx = rx - t * E[:, 0]
        dy = ry - t * E[:, 1]
        near = (dx * dx + dy * dy).min(axis=1) <= self.tol ** 2
        y = X[:, 1:2]
        up = (A[None, :, 1] <= y) & (B[None, :, 1] > y)
        down = (A[None, :, 1] > y) & (B[None, :, 1] <= y)
        side = E[None, :, 0] * ry - E[None, :, 1] * rx
        wind = np.where(up & (side > 0), 1, 0) - np.where(down & (side < 0), 1, 0)
        inside = wind.sum(axis=1) != 0
        res = np.where(inside, 1, -1)
        res[near] = 0
        return res

    def seg_visible(self, P0, P1) -> np.ndarray:
        """Closed segments P0[i]P1[i] inside the polygon (touching allowed)."""
        P0 = np.asarray(P0, dtype=float).reshape(-1, 2)
        P1 = np.asarray(P1, dtype=float).reshape(-1, 2)
        out = np.empty(len(P0), dtype=bool)
        for s in range(0, len(P0), _CHUNK):
            out[s:s + _CHUNK] = self._seg_visible(P0[s:s + _CHUNK], P1[s:s + _CHUNK])
        return out

    def _seg_visible(self, P0, P1):
        A, B = self.A, self.B
        tol = self.tol
        D = P1 - P0
        Ln = np.hypot(D[:, 0], D[:, 1])
        E = B - A
        Le = np.hypot(E[:, 0], E[:, 1])

        def cr(ux, uy, vx, vy):
            return ux * vy - uy * vx

        o1 = cr(D[:, None, 0], D[:, None, 1], A[None, :, 0] - P0[:, None, 0], A[None, :, 1] - P0[:, None, 1])
        o2 = cr(D[:, None, 0], D[:, None, 1], B[None, :, 0] - P0[:, None, 0], B[None, :, 1] - P0[:, None, 1])
        o3 = cr(E[None, :, 0], E[None, :, 1], P0[:, None, 0] - A[None, :, 0], P0[:, None, 1] - A[None, :, 1])
        o4 = cr(E[None, :, 0], E[None, :, 1], P1[:, None, 0] - A[None, :, 0], P1[:, None, 1] - A[None, :, 1])
        s12 = tol * Ln[:, None]
        s34 = tol * Le[None, :]
        proper = (((o1 > s12) & (o2 < -s12)) | ((o1 < -s12) & (o2 > s12))) & (
            ((o3 > s34) & (o4 < -s34)) | ((o3 < -s34) & (o4 > s34)))
        ok = ~proper.any(axis=1)
        ok &= self.location(0.5 * (P0 + P1)) >= 0
        # vertices touching the open segment: probe just before and after
        rel = self.V[None, :, :] - P0[:, None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (rel[..., 0] * D[:, None, 0] + rel[..., 1] * D[:, None, 1]) / (Ln[:, None] ** 2)
            off = np.abs(cr(D[:, None, 0], D[:, None, 1], rel[..., 0], rel[..., 1])) / Ln[:, None]
        touch = (off <= tol) & (t * Ln[:, None] > tol) & ((1 - t) * Ln[:, None] > tol) & ok[:, None]
        si, vi = np.nonzero(touch)
        if len(si):
            step = np.minimum(1e-6 * self.diag, 0.25 * Ln[si]) / Ln[si]
            base = self.V[vi]
            probes = np.concatenate([base - (step * D[si].T).T, base + (step * D[si].T).T])
            loc = self.location(probes)
            bad = (loc[: len(si)] < 0) | (loc[len(si):] < 0)
            ok[si[bad]] = False
        ok[Ln <= tol] = True
        return ok

    def vertex_graph(self) -> np.ndarray:
        n = self.n
        ii, jj = np.triu_indices(n, 1)
        vis = self.seg_visible(self.V[ii], self.V[jj])
        W = np.full((n, n), np.inf)
        d = np.hypot(*(self.V[ii] - self.V[jj]).T)
        W[ii[vis], jj[vis]] = d[vis]
        W[jj[vis], ii[vis]] = d[vis]
        np.fill_diagonal(W, 0.0)
        G = shortest_path(W, method="D", directed=False)
        return G

    def boundary_param(self, pt) -> float:
        pt = np.asarray(pt, dtype=float)
        E = self.B - self.A
        L2 = (E ** 2).sum(1)
        t = np.clip(((pt - self.A) * E).sum(1) / L2, 0, 1)
        d = np.hypot(*(self.A + t[:, None] * E - pt).T)
        i = int(np.argmin(d))
        return i + float(t[i])


_POLY_CACHE: dict = {}


def _poly(P) -> _Poly:
    key = id(P)
    hit = _POLY_CACHE.get(key)
    if hit is None or hit[0] is not P:
        if len(_POLY_CACHE) > 64:
            _POLY_CACHE.clear()
        hit = (P, _Poly(P.vertices), None)
        _POLY_CACHE[key] = hit
    return hit[1]


def _graph(P) -> np.ndarray:
    key = id(P)
    entry = _POLY_CACHE.get(key)
    if entry is None or entry[0] is not P:
        _poly(P)
        entry = _POLY_CACHE[key]
    if entry[2] is None:
        entry = (entry[0], entry[1], entry[1].vertex_graph())
        _POLY_CACHE[key] = entry
    return entry[2]


def oracle_geodesic(P, x, y) -> float:
    """Shortest path length by Dijkstra on the visibility graph of vertices plus x and y."""
    Q = _poly(P)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(Q.location(np.array([x, y])) < 0):
        raise PointOutsidePolygon("oracle_geodesic: point outside polygon")
    if Q.seg_visible(x[None], y[None])[0]:
        return float(math.dist(x, y))
    G = _graph(P)
    vx = Q.seg_visible(np.repeat(x[None], Q.n, 0), Q.V)
    vy = Q.seg_visible(np.repeat(y[None], Q.n, 0), Q.V)
    dx = np.where(vx, np.hypot(*(Q.V - x).T), np.inf)
    dy = np.where(vy, np.hypot(*(Q.V - y).T), np.inf)
    return float(np.min(dx[:, None] + G + dy[None, :]))


class _SegmentTarget:
    """Geodesic distance from many points to a fixed segment."""

    def __init__(self, Q: _Poly, G: np.ndarray, s0, s1):
        self.Q = Q
        self.s0 = np.asarray(s0, dtype=float)
        self.s1 = np.asarray(s1, dtype=float)
        foot = self._foot(Q.V)
        direct = np.hypot(*(foot - Q.V).T)
        vis = Q.seg_visible(Q.V, foot)
        d0 = np.where(vis, direct, np.inf)
        self.D = np.min(G + d0[None, :], axis=1)

    def _foot(self, X):
        d = self.s1 - self.s0
        dd = float(d @ d)
        t = np.clip(((X - self.s0) @ d) / dd, 0, 1) if dd > 0 else np.zeros(len(X))
        return self.s0[None, :] + t[:, None] * d[None, :]

    def distances(self, X, vis_xv) -> np.ndarray:
        """``vis_xv[i, v]`` says whether X[i] sees vertex v."""
        Q = self.Q
        foot = self._foot(X)
        direct = np.hypot(*(foot - X).T)
        ok = Q.seg_visible(X, foot)
        best = np.where(ok, direct, np.inf)
        dxv = np.hypot(X[:, None, 0] - Q.V[None, :, 0], X[:, None, 1] - Q.V[None, :, 1])
        relay = np.where(vis_xv, dxv + self.D[None, :], np.inf).min(axis=1)
        return np.minimum(best, relay)


def _vis_to_vertices(Q: _Poly, X) -> np.ndarray:
    n = Q.n
    A = np.repeat(X, n, axis=0)
    B = np.tile(Q.V, (len(X), 1))
    return Q.seg_visible(A, B).reshape(len(X), n)


def _arc_region(Q: _Poly, p, q) -> _Poly:
    """Explicit boundary of the part of P clockwise from p to q."""
    sp, sq = Q.boundary_param(p), Q.boundary_param(q)
    span = (sq - sp) % Q.n
    pts = [np.asarray(p, dtype=float)]
    for k in range(1, Q.n + 1):
        i = (math.floor(sp) + k) % Q.n
        off = (i - sp) % Q.n
        if off <= 1e-12 or off >= span - 1e-12:
            break
        pts.append(Q.V[i])
    pts.append(np.asarray(q, dtype=float))
    R = _Poly.__new__(_Poly)
    R.V = np.array(pts)
    R.n = len(pts)
    R.A = R.V
    R.B = np.roll(R.V, -1, axis=0)
    R.diag = Q.diag
    R.tol = Q.tol
    return R


def _chord_xy(H):
    if hasattr(H, "p") and hasattr(H.p, "coords"):
        return np.array(H.p.coords), np.array(H.q.coords)
    p, q = H
    return np.asarray(p, dtype=float), np.asarray(q, dtype=float)


class HalfPolygonRadius:
    """max_H d(x, H) evaluated on arrays of points."""

    def __init__(self, P, H_list):
        self.Q = Q = _poly(P)
        G = _graph(P)
        self.items = []
        for H in H_list:
            p, q = _chord_xy(H)
            self.items.append((_arc_region(Q, p, q), _SegmentTarget(Q, G, p, q)))

    def __call__(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float).reshape(-1, 2)
        if not self.items:
            return np.zeros(len(X))
        vis = _vis_to_vertices(self.Q, X)
        r = np.zeros(len(X))
        for region, target in self.items:
            inside = region.location(X) >= 0
            d = np.zeros(len(X))
            if np.any(~inside):
                d[~inside] = target.distances(X[~inside], vis[~inside])
            r = np.maximum(r, d)
        return r


def visibility_windows(Q: _Poly, u) -> list[tuple[np.ndarray, np.ndarray]]:
    """Segments of the boundary of u's visibility region that cross the interior."""
    u = np.asarray(u, dtype=float)
    out = []
    vis = Q.seg_visible(np.repeat(u[None], Q.n, 0), Q.V)
    for w in range(Q.n):
        if not vis[w] or not Q.reflex[w]:
            continue
        vw = Q.V[w]
        d = vw - u
        L = math.hypot(*d)
        if L <= Q.tol:
            continue
        d = d / L
        nrm = np.array([-d[1], d[0]])
        sides = []
        for nb in (Q.V[w - 1], Q.V[(w + 1) % Q.n]):
            off = float((nb - vw) @ nrm)
            if abs(off) <= Q.tol and float((nb - vw) @ d) < 0:
                continue  # edge running back toward u
            sides.append(0 if abs(off) <= Q.tol else (1 if off > 0 else -1))
        if not sides or 0 in sides or len(set(sides)) != 1:
            continue
        hit = _shoot(Q, vw, d)
        if hit is not None and math.dist(hit, vw) > Q.tol:
            out.append((vw, hit))
    return out


def _shoot(Q: _Poly, o, d):
    """Walk along the ray from o until it leaves the polygon."""
    A, E = Q.A, Q.B - Q.A
    den = d[0] * E[:, 1] - d[1] * E[:, 0]
    w = A - o
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (w[:, 0] * E[:, 1] - w[:, 1] * E[:, 0]) / den
        s = (w[:, 0] * d[1] - w[:, 1] * d[0]) / den
    Le = np.hypot(E[:, 0], E[:, 1])
    ok = (np.abs(den) > 1e-14 * Le) & (s >= -Q.tol / Le) & (s <= 1 + Q.tol / Le) & (t > Q.tol)
    ts = np.unique(np.round(t[ok] / Q.tol) * Q.tol) if np.any(ok) else np.zeros(0)
    step = 1e-6 * Q.diag
    for k, tk in enumerate(ts):
        nxt = ts[k + 1] if k + 1 < len(ts) else tk + 2 * step
        probe = o + (tk + min(step, 0.5 * (nxt - tk))) * d
        if Q.location(probe[None])[0] < 0:
            return o + tk * d
    return None


class VisibilityRadius:
    """max_u d_V(x, u) evaluated on arrays of points."""

    def __init__(self, P, U):
        self.Q = Q = _poly(P)
        G = _graph(P)
        self.sites = []
        for u in U:
            targets = [_SegmentTarget(Q, G, a, b) for a, b in visibility_windows(Q, u)]
            self.sites.append((np.asarray(u, dtype=float), targets))

    def __call__(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float).reshape(-1, 2)
        vis = _vis_to_vertices(self.Q, X)
        r = np.zeros(len(X))
        for u, targets in self.sites:
            sees = self.Q.seg_visible(X, np.repeat(u[None], len(X), 0))
            d = np.zeros(len(X))
            rest = ~sees
            if np.any(rest):
                best = np.full(int(rest.sum()), np.inf)
                for tg in targets:
                    best = np.minimum(best, tg.distances(X[rest], vis[rest]))
                d[rest] = best
            r = np.maximum(r, d)
        return r


def _inside_cells(Q: _Poly, grid: GridSpec, ii, jj):
    C = grid.centers(ii, jj)
    keep = Q.location(C) >= 0
    return C[keep], ii[keep], jj[keep]


def grid_minimize(P, f, grid: GridSpec, coarse: int | None = 64, extra_points=(), window: int = 3):
    """Minimise f over the centres of grid cells inside P.

    With ``coarse`` set, a coarse grid is scanned first and the minimum is
    then followed through windows of the full grid until it sits strictly
    inside its window (valid for the geodesically convex radius functions
    used here).  Cells around ``extra_points`` are always evaluated too.
    Returns ``(argmin_point, min_value, evaluated)`` where ``evaluated`` maps
    cell index to value.
    """
    Q = _poly(P)
    N = grid.resolution
    values: dict = {}

    def evaluate(ii, jj):
        ii = np.asarray(ii).ravel()
        jj = np.asarray(jj).ravel()
        mask = np.array([(i, j) not in values for i, j in zip(ii, jj)], dtype=bool)
        ii, jj = ii[mask], jj[mask]
        if len(ii) == 0:
            return
        C, ii, jj = _inside_cells(Q, grid, ii, jj)
        if len(C) == 0:
            return
        for i, j, v in zip(ii, jj, f(C)):
            values[(int(i), int(j))] = float(v)

    if coarse is None or coarse >= N:
        ii, jj = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
        evaluate(ii, jj)
    else:
        step = N / coarse
        ci = np.unique(np.minimum(N - 1, (np.arange(coarse) * step + step / 2).astype(int)))
        ii, jj = np.meshgrid(ci, ci, indexing="ij")
        evaluate(ii, jj)
        seeds = sorted(values.items(), key=lambda kv: (kv[1], kv[0]))[:3]
        radius = max(window, int(math.ceil(step)) + 1)
        for (si, sj), _ in seeds:
            _descend(values, evaluate, si, sj, radius, N)
    for pt in extra_points:
        i, j = grid.index_of(pt)
        _descend(values, evaluate, i, j, window, N, rounds=1)
    if not values:
        raise ValueError("no grid cell centre lies inside the polygon")
    (bi, bj), bv = min(values.items(), key=lambda kv: (kv[1], kv[0]))
    return grid.centers(bi, bj), bv, values


def _descend(values, evaluate, i, j, radius, N, rounds=50):
    for _ in range(rounds):
        lo_i, hi_i = max(0, i - radius), min(N - 1, i + radius)
        lo_j, hi_j = max(0, j - radius), min(N - 1, j + radius)
        ii, jj = np.meshgrid(np.arange(lo_i, hi_i + 1), np.arange(lo_j, hi_j + 1), indexing="ij")
        evaluate(ii, jj)
        local = [(v, k) for k, v in values.items() if lo_i <= k[0] <= hi_i and lo_j <= k[1] <= hi_j]
        if not local:
            return
        _, (bi, bj) = min(local)
        if (bi, bj) == (i, j) or radius == 0:
            return
        i, j = bi, bj


def oracle_halfpolygon_radius(P, H_list, grid: GridSpec, coarse: int | None = 64, extra_points=()):
    """Grid minimum of max_H d(x, H); returns (argmin cell centre, value)."""
    pt, val, _ = grid_minimize(P, HalfPolygonRadius(P, H_list), grid, coarse, extra_points)
    return pt, val


def oracle_visibility_radius(P, U, grid: GridSpec, coarse: int | None = 64, extra_points=()):
    """Grid minimum of max_u d_V(x, u); returns (argmin cell centre, value)."""
    pt, val, _ = grid_minimize(P, VisibilityRadius(P, U), grid, coarse, extra_points)
    return pt, val


def oracle_distance_to_visibility(P, x, u) -> float:
    return float(VisibilityRadius(P, [u])(np.asarray(x, dtype=float)[None])[0])


def oracle_distance_to_half_polygon(P, x, H) -> float:
    return float(HalfPolygonRadius(P, [H])(np.asarray(x, dtype=float)[None])[0])


@dataclass(frozen=True, eq=False)
class Instance:
    polygon: object
    sites: tuple


def _segments_cross(a, b, c, d) -> bool:
    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    return (orient(a, b, c) * orient(a, b, d) < 0) and (orient(c, d, a) * orient(c, d, b) < 0)


def _two_opt(pts: np.ndarray, rng: np.random.Generator, max_rounds: int = 2000):
    order = list(rng.permutation(len(pts)))
    n = len(order)
    for _ in range(max_rounds):
        crossing = None
        for i in range(n):
            a, b = pts[order[i]], pts[order[(i + 1) % n]]
            for j in range(i + 2, n):
                if i == 0 and j == n - 1:
                    continue
                c, d = pts[order[j]], pts[order[(j + 1) % n]]
                if _segments_cross(a, b, c, d):
                    crossing = (i, j)
                    break
            if crossing:
                break
        if crossing is None:
            return [pts[k] for k in order]
        i, j = crossing
        order[i + 1:j + 1] = order[i + 1:j + 1][::-1]
    return None


def _well_separated(V: np.ndarray, rel: float) -> bool:
    n = len(V)
    diag = float(np.hypot(*(V.max(axis=0) - V.min(axis=0))))
    for i in range(n):
        for e in range(n):
            if e == i or (e + 1) % n == i:
                continue
            a, b = V[e], V[(e + 1) % n]
            d = b - a
            t = min(1.0, max(0.0, float((V[i] - a) @ d) / float(d @ d)))
            if math.dist(V[i], a + t * d) < rel * diag:
                return False
    return True


def random_polygon(rng: np.random.Generator, n: int, scale: float = 10.0, rel_gap: float = 5e-3):
    """Random simple polygon by 2-opt uncrossing of random points."""
    from .geometry import validate_polygon

    while True:
        pts = rng.uniform(0.0, scale, size=(n, 2))
        ring = _two_opt(pts, rng)
        if ring is None:
            continue
        V = np.array(ring)
        if not _well_separated(V, rel_gap):
            continue
        try:
            return validate_polygon(V.tolist())
        except ValueError:
            continue


def random_interior_points(P, rng: np.random.Generator, m: int, margin_rel: float = 1e-3) -> list:
    Q = _poly(P)
    x0, y0 = Q.V.min(axis=0)
    x1, y1 = Q.V.max(axis=0)
    out = []
    while len(out) < m:
        c = rng.uniform((x0, y0), (x1, y1))
        if Q.location(c[None])[0] <= 0:
            continue
        d = np.hypot(*(np.clip(((c - Q.A) * (Q.B - Q.A)).sum(1) / ((Q.B - Q.A) ** 2).sum(1), 0, 1)[:, None]
                       * (Q.B - Q.A) + Q.A - c).T)
        if d.min() < margin_rel * Q.diag:
            continue
        out.append((float(c[0]), float(c[1])))
    return out


def random_instance(seed: int, n_max: int = 30, m_max: int = 8, n_min: int = 5, m_min: int = 1) -> Instance:
    """Deterministic random polygon with interior sites; same seed, same instance."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_min, n_max + 1))
    m = int(rng.integers(m_min, m_max + 1))
    P = random_polygon(rng, n)
    return Instance(P, tuple(random_interior_points(P, rng, m)))


def random_windows(P, rng: np.random.Generator, k: int, tries: int = 400) -> list:
    """Up to k windows H(u, r) from random sites and visible reflex vertices."""
    from .errors import GeometryError
    from .halfpolygon import build_window

    reflex = [i for i in range(P.n) if P.reflex[i]]
    out = []
    if not reflex:
        return out
    for _ in range(tries):
        if len(out) >= k:
            break
        u = random_interior_points(P, rng, 1)[0]
        r = int(reflex[int(rng.integers(len(reflex)))])
        try:
            out.append(build_window(P, u, r, id=len(out)).half)
        except GeometryError:
            continue
    return out
