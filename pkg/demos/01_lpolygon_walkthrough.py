"""Walk through the pieces on the L-shaped polygon.

Run: python demos/01_lpolygon_walkthrough.py
"""

import math

from viscenter.center import geodesic_center
from viscenter.geometry import triangulate, validate_polygon
from viscenter.halfpolygon import build_window, half_polygon
from viscenter.shortest_path import distance_to_half_polygon, geodesic
from viscenter.visibility import distance_to_visibility, visibility_center

L = validate_polygon([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])
T = triangulate(L)
corner = next(i for i, v in enumerate(L.vertices) if tuple(v) == (1.0, 1.0))
print(f"L-polygon: {L.n} vertices stored clockwise, reflex corner at index {corner}")

# shortest paths bend only at reflex vertices
g = geodesic(L, T, (0.5, 1.8), (1.8, 0.5))
print(f"geodesic (0.5,1.8) -> (1.8,0.5): length {g.length:.12f} (2*sqrt(0.89) = {2 * math.sqrt(0.89):.12f})")
print("  waypoints", [tuple(round(c, 3) for c in p) for p in g.waypoints])

# the window of a site through the corner: the part of L from which the site is in view past that corner
w = build_window(L, (1.8, 0.5), corner)
print(f"window of site (1.8,0.5) at the corner: chord {w.half.p.coords} -> {w.half.q.coords}")

# seeing the site costs exactly the distance to that window
x = (0.5, 1.8)
d, path, _ = distance_to_visibility(L, T, x, (1.8, 0.5))
dh = distance_to_half_polygon(L, T, x, w.half).distance
print(f"from {x}: travel {d:.6f} to see the site; distance to the window {dh:.6f}")
print("  witness path", [tuple(round(c, 4) for c in p) for p in path.waypoints])

# the L is star-shaped: every vertex is seen from the corner square
ans = visibility_center(L, list(L.vertices))
print(f"visibility center of the vertices: radius {ans.radius}, center {tuple(float(c) for c in ans.center.center)}")

# two strips at the tips of the arms: nobody sees both, the center balances them
H = [half_polygon(L, (1.5, 1), (1.5, 0), 0), half_polygon(L, (0, 1.5), (1, 1.5), 1)]
res = geodesic_center(L, H)
print(f"center of the two tip strips: {tuple(round(float(c), 6) for c in res.center)}, radius {res.radius:.6f}, "
      f"determined by {res.determining}")
