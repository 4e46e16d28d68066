"""Visibility center of two sites tucked into the towers of a zigzag polygon.

Each site is seen only from its own tower and a wedge of the bottom strip.
The wedges do not meet, so the center sits between them and walks to both.

Run: python demos/02_zigzag_visibility_center.py [out.svg]
"""

import os
import sys

from viscenter.io import load_instance, result_doc
from viscenter.oracle import grid_for, oracle_visibility_radius
from viscenter.svg import render_svg
from viscenter.visibility import visibility_center

HERE = os.path.dirname(os.path.abspath(__file__))
inst = load_instance(os.path.join(HERE, "..", "tests", "data", "zigzag_inner.json"))
P, U = inst.polygon, inst.sites


def pt(v, nd=4):
    return tuple(round(float(a), nd) for a in v)


ans = visibility_center(P, U)
c = ans.center
print(f"windows: {len(ans.windows)}")
for w in ans.windows:
    print(f"  site {pt(w.source)} past vertex {pt(P.vertices[w.fulcrum])}: chord {pt(w.half.p.coords)} -> {pt(w.half.q.coords)}")
print(f"center {pt(c.center, 6)}, radius {c.radius:.12f}")
for s in ans.per_site:
    end = s.path.waypoints[-1] if s.path is not None else s.site
    print(f"  site {pt(s.site)}: walk {s.distance:.6f} to {pt(end)}")

# the two chords meet the bottom edge at x = 2 + 2/19 and x = 4 - 2/19
closed = 1 - 2 / 19
print(f"closed form (both chords reached at y = 0): {closed:.12f}")

for n in (100, 200, 400):
    _, val = oracle_visibility_radius(P, U, grid_for(P, n), extra_points=[c.center])
    print(f"grid {n:3d}: {val:.12f}  (tolerance {2 * P.bbox_diag / n:.4f})")

out = sys.argv[1] if len(sys.argv) > 1 else "zigzag_inner.svg"
doc = result_doc(c, "visibility", 0, P, per_site=ans.per_site, windows=ans.windows)
with open(out, "w") as fh:
    fh.write(render_svg(inst, doc))
print(f"wrote {out}")
