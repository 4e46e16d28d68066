import math

import numpy as np
import pytest

from viscenter.errors import EmptySiteSet, PointOutsidePolygon
from viscenter.geometry import triangulate, visible
from viscenter.halfpolygon import contains_point
from viscenter.oracle import (
    grid_for,
    oracle_distance_to_visibility,
    oracle_visibility_radius,
    random_instance,
    random_interior_points,
)
from viscenter.visibility import (
    compute_H_reflex,
    distance_to_visibility,
    visibility_center,
    visibility_center_of_polygon,
)


def test_convex_polygon_radius_zero(square):
    ans = visibility_center(square, [(0.1, 0.1), (0.9, 0.2), (0.5, 0.9)])
    assert ans.radius == 0.0 and ans.windows == ()
    assert all(s.distance == 0.0 for s in ans.per_site)


def test_lpoly_vertices_radius_zero(lpoly):
    ans = visibility_center_of_polygon(lpoly)
    assert ans.radius == 0.0
    assert all(visible(lpoly, ans.center.center, v) for v in lpoly.vertices)


def test_lpoly_arm_sites(lpoly):
    U = [(1.8, 0.5), (0.5, 1.8)]
    ws = compute_H_reflex(lpoly, U)
    assert len(ws) == 2
    ans = visibility_center(lpoly, U)
    # both sites are seen from the corner square, so nobody has to move
    assert ans.radius == 0.0
    assert all(visible(lpoly, ans.center.center, u) for u in U)


def test_zigzag_inner_tower_sites(zigzag):
    # sites hugging the inner tower walls are seen only from disjoint parts of the bottom strip
    P = zigzag
    U = [(1.9, 3.9), (4.1, 3.9)]
    ans = visibility_center(P, U)
    _, val = oracle_visibility_radius(P, U, grid_for(P, 200), extra_points=[ans.center.center])
    assert ans.radius > 0
    assert abs(ans.radius - val) <= 2 * P.bbox_diag / 200
    assert max(s.distance for s in ans.per_site) == pytest.approx(ans.radius, abs=1e-9)


def test_zigzag_vertices_closed_form(zigzag):
    # seeing (2, 4) needs x <= 2 and seeing (4, 4) needs x >= 4 inside the bottom strip
    ans = visibility_center_of_polygon(zigzag)
    assert ans.radius == pytest.approx(1.0, abs=1e-9)
    seg = ans.center.degenerate_segment
    assert seg is not None
    assert np.allclose(ans.center.center, (3, 1), atol=1e-5)
    assert all(abs(p[0] - 3) <= 1e-9 for p in seg)
    _, val = oracle_visibility_radius(zigzag, list(zigzag.vertices), grid_for(zigzag, 200))
    assert abs(ans.radius - val) <= 2 * zigzag.bbox_diag / 200


def test_zigzag_tower_sites(zigzag):
    # both tower sites are seen from the middle of the bottom strip
    ans = visibility_center(zigzag, [(1, 3.5), (5, 3.5)])
    assert ans.radius == 0.0


def test_distance_to_visibility_examples(lpoly):
    T = triangulate(lpoly)
    # grazing through the reflex corner counts as seeing
    assert distance_to_visibility(lpoly, T, (0.2, 1.8), (1.8, 0.2))[0] == 0.0
    assert distance_to_visibility(lpoly, T, (0.5, 0.5), (1.8, 0.5))[0] == 0.0
    d, path, w = distance_to_visibility(lpoly, T, (0.5, 1.9), (1.9, 0.5))
    assert d > 0 and w is not None
    assert np.allclose(path.waypoints[0], (0.5, 1.9))
    assert contains_point(w.half, path.waypoints[-1])
    assert visible(lpoly, path.waypoints[-1], (1.9, 0.5))


def test_errors(lpoly):
    with pytest.raises(EmptySiteSet):
        visibility_center(lpoly, [])
    with pytest.raises(PointOutsidePolygon):
        visibility_center(lpoly, [(1.5, 1.5)])


@pytest.mark.parametrize("seed", range(10))
def test_distance_to_visibility_matches_oracle(seed):
    inst = random_instance(seed, n_max=25)
    P = inst.polygon
    T = triangulate(P)
    rng = np.random.default_rng(seed + 5)
    for u in inst.sites[:3]:
        for x in random_interior_points(P, rng, 5):
            d, path, w = distance_to_visibility(P, T, x, u)
            assert abs(d - oracle_distance_to_visibility(P, x, u)) <= 1e-6 * P.bbox_diag
            if d > 0:
                # the end of the witness path sees u
                end = path.waypoints[-1]
                assert visible(P, end, u) or math.dist(end, u) <= 1e-9 * P.bbox_diag


@pytest.mark.parametrize("seed", range(10))
def test_visibility_center_matches_grid(seed):
    inst = random_instance(seed, n_max=25, m_max=6)
    P = inst.polygon
    ans = visibility_center(P, inst.sites)
    _, val = oracle_visibility_radius(P, inst.sites, grid_for(P, 120), extra_points=[ans.center.center])
    assert abs(ans.radius - val) <= 2 * P.bbox_diag / 120
    assert max(s.distance for s in ans.per_site) == pytest.approx(ans.radius, abs=1e-7 * P.bbox_diag)


@pytest.mark.parametrize("seed", range(6))
def test_windows_only_from_reflex_vertices_seen_by_sites(seed):
    inst = random_instance(seed, n_max=25)
    P = inst.polygon
    for w in compute_H_reflex(P, inst.sites):
        assert P.reflex[w.fulcrum]
        assert visible(P, w.source, P.vertices[w.fulcrum])
        assert contains_point(w.half, w.source)
