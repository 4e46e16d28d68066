import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from viscenter.errors import (
    DegenerateDirection,
    DuplicateConsecutiveVertex,
    PointOutsidePolygon,
    SelfIntersecting,
    SingleTriangle,
    TooFewVertices,
)
from viscenter.geometry import (
    Location,
    Triangulation,
    balanced_diagonal,
    is_reflex,
    orientation,
    point_in_polygon,
    ray_shoot,
    signed_area,
    split_at,
    triangulate,
    validate_polygon,
    visible,
)
from viscenter.oracle import random_instance, random_interior_points

from conftest import SQUARE

coord = st.floats(-100, 100, allow_nan=False)
point = st.tuples(coord, coord)


# ---------------------------------------------------------------- orientation


def test_orientation_examples():
    assert orientation((0, 0), (1, 0), (0, 1)) == 1
    assert orientation((0, 0), (1, 0), (2, 0)) == 0
    assert orientation((0, 0), (0, 1), (1, 1)) == -1


@given(point, point, point, point)
def test_orientation_antisymmetric_and_translation_invariant(a, b, c, t):
    o = orientation(a, b, c)
    assert orientation(a, c, b) == -o
    shift = lambda p: (p[0] + t[0], p[1] + t[1])
    area = abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
    if area > 1e-6:  # translation only moves near-collinear triples across the tolerance
        assert orientation(shift(a), shift(b), shift(c)) == o


# ----------------------------------------------------------------- validation


def test_ccw_square_is_stored_clockwise():
    P = validate_polygon(SQUARE)
    assert P.coords() == [(0, 0), (0, 1), (1, 1), (1, 0)]
    assert signed_area(P.vertices) < 0


@pytest.mark.parametrize("raw, err", [
    ([(0, 0), (1, 1), (1, 0), (0, 1)], SelfIntersecting),
    ([(0, 0), (1, 0)], TooFewVertices),
    ([(0, 0), (1, 0), (1, 0), (0, 1)], DuplicateConsecutiveVertex),
])
def test_invalid_polygons(raw, err):
    with pytest.raises(err) as info:
        validate_polygon(raw)
    assert info.value.index is not None


def test_collinear_boundary_vertex_allowed():
    P = validate_polygon([(0, 0), (0.5, 0), (1, 0), (1, 1), (0, 1)])
    assert P.n == 5


# ----------------------------------------------------------- point location


def test_point_in_polygon_examples(square):
    assert point_in_polygon(square, (0.5, 0.5)) is Location.INSIDE
    assert point_in_polygon(square, (1, 0.5)) is Location.ON_BOUNDARY
    assert point_in_polygon(square, (2, 2)) is Location.OUTSIDE


# ------------------------------------------------------------------ visibility


def test_visible_examples(square, lpoly):
    assert visible(square, (0.1, 0.1), (0.9, 0.9))
    assert not visible(lpoly, (0.5, 1.8), (1.8, 0.5))
    assert visible(lpoly, (0, 1.5), (1.5, 0.5))


def test_visible_rejects_outside_points(lpoly):
    with pytest.raises(PointOutsidePolygon):
        visible(lpoly, (1.5, 1.5), (0.5, 0.5))


def test_visible_grazing_reflex_vertex_counts(lpoly):
    assert visible(lpoly, (0.2, 1.8), (1.8, 0.2))


@pytest.mark.parametrize("seed", range(6))
def test_visible_symmetric(seed):
    inst = random_instance(seed, n_max=20)
    P = inst.polygon
    pts = random_interior_points(P, np.random.default_rng(seed), 12) + [tuple(v) for v in P.vertices[:6]]
    for x in pts:
        for y in pts:
            assert visible(P, x, y) == visible(P, y, x)


# ------------------------------------------------------------------ ray shoot


def test_ray_shoot_examples(square, lpoly):
    assert np.allclose(ray_shoot(square, (0.5, 0.5), (1, 0)).coords, (1, 0.5))
    d = np.subtract((1, 1), (0.5, 1.8))
    assert np.allclose(ray_shoot(lpoly, (0.5, 1.8), d / np.hypot(*d)).coords, (1.625, 0))
    assert np.allclose(ray_shoot(square, (0, 0.5), (1, 0)).coords, (1, 0.5))


def test_ray_shoot_zero_direction(square):
    with pytest.raises(DegenerateDirection):
        ray_shoot(square, (0.5, 0.5), (0, 0))


@pytest.mark.parametrize("seed", range(6))
def test_ray_shoot_hits_boundary_with_inside_segment(seed):
    P = random_instance(seed, n_max=25).polygon
    rng = np.random.default_rng(seed)
    for o in random_interior_points(P, rng, 10):
        ang = rng.uniform(0, 2 * math.pi)
        bp = ray_shoot(P, o, (math.cos(ang), math.sin(ang)))
        assert point_in_polygon(P, bp.coords) is Location.ON_BOUNDARY
        assert visible(P, o, bp.coords)
        mid = 0.5 * (np.asarray(o) + bp.xy)
        assert point_in_polygon(P, mid) is not Location.OUTSIDE


# ----------------------------------------------------------------- reflexity


def test_is_reflex_examples(square, lpoly):
    assert not any(is_reflex(square, i) for i in range(4))
    idx = {tuple(map(float, v)): i for i, v in enumerate(lpoly.vertices)}
    assert is_reflex(lpoly, idx[(1.0, 1.0)])
    assert not is_reflex(lpoly, idx[(0.0, 0.0)])


# --------------------------------------------------------------- triangulation


def test_triangulation_counts(square, lpoly):
    T = triangulate(square)
    assert len(T.triangles) == 2 and len(T.diagonals) == 1
    assert sum(len(v) for v in T.dual_tree.values()) == 2
    T = triangulate(lpoly)
    assert len(T.triangles) == 4
    assert sum(len(v) for v in T.dual_tree.values()) == 6


def _tri_area(V, t):
    a, b, c = V[list(t)]
    return abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])) / 2


@pytest.mark.parametrize("seed", range(12))
def test_triangulation_partitions_polygon(seed):
    P = random_instance(seed, n_max=40).polygon
    T = triangulate(P)
    assert len(T.triangles) == P.n - 2
    total = sum(_tri_area(P.vertices, t) for t in T.triangles)
    assert abs(total - P.area) <= 1e-9 * P.bbox_diag ** 2
    # dual graph connected and acyclic: n-3 edges reaching every triangle
    edges = {tuple(sorted((t, nb))) for t, nbs in T.dual_tree.items() for nb, _ in nbs}
    assert len(edges) == len(T.triangles) - 1
    assert set(T.dual_path(0, len(T.triangles) - 1)) <= set(range(len(T.triangles)))
    assert all(len(T.dual_path(0, t)) >= 1 for t in range(len(T.triangles)))
    assert triangulate(P).triangles == T.triangles


def _fan(n):
    """Fan triangulation of a convex n-gon: its dual is a path of n-2 triangles."""
    ang = -np.linspace(0, 2 * math.pi, n, endpoint=False)
    P = validate_polygon(np.c_[np.cos(ang), np.sin(ang)])
    tris = tuple((0, i, i + 1) for i in range(1, n - 1))
    diags = tuple((0, i) for i in range(2, n - 1))
    dual = {t: [] for t in range(len(tris))}
    for t in range(len(tris) - 1):
        dual[t].append((t + 1, (0, t + 2)))
        dual[t + 1].append((t, (0, t + 2)))
    return Triangulation(tris, diags, dual, P)


def test_balanced_diagonal_on_paths():
    T = _fan(6)
    d = balanced_diagonal(T, range(4))
    a, b = split_at(T, range(4), d)
    assert sorted((len(a), len(b))) == [2, 2]
    T = _fan(7)
    d = balanced_diagonal(T, range(5))
    a, b = split_at(T, range(5), d)
    assert sorted((len(a), len(b))) == [2, 3]
    with pytest.raises(SingleTriangle):
        balanced_diagonal(T, [0])


@pytest.mark.parametrize("seed", range(12))
def test_balanced_diagonal_bound(seed):
    P = random_instance(seed, n_max=40).polygon
    T = triangulate(P)
    k = len(T.triangles)
    if k < 2:
        return
    d = balanced_diagonal(T, range(k))
    a, b = split_at(T, range(k), d)
    assert a and b and len(a) + len(b) == k
    assert max(len(a), len(b)) <= math.ceil(2 * k / 3)
