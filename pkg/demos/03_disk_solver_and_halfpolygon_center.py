"""The small disk problem under the center search, then a full half-polygon center.

Inside one triangle of the final refinement every distance is either a cone
distance (reach an apex, then go straight) or a plain distance to a line.
Minimising the largest of those is a tiny LP-type problem.

Run: python demos/03_disk_solver_and_halfpolygon_center.py [seed]
"""

import sys
import time

import numpy as np

from viscenter.center import geodesic_center
from viscenter.lpdisk import disk, half_plane, min_feasible_disk
from viscenter.oracle import HalfPolygonRadius, grid_for, grid_minimize, random_instance, random_windows

# three apexes with travel already spent, plus the line y = 4 to reach
cons = [disk((0, 0), 0.5, id=0), disk((4, 0), 0.0, id=1), disk((1, 3), 0.2, id=2), half_plane((0, -1), -4, id=3)]
x, rho, basis = min_feasible_disk(cons)
print(f"disk problem: x = {tuple(np.round(x, 6).tolist())}, rho = {rho:.9f}, tight = {sorted(c.id for c in basis)}")
print("  values at x:", [round(c.value(x), 9) for c in cons])

# the answer does not depend on the shuffle seed
for s in (1, 2, 3):
    x2, rho2, _ = min_feasible_disk(cons, seed=s)
    print(f"  seed {s}: same bits = {bool(np.array_equal(x, x2) and rho == rho2)}")

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 7
P = random_instance(seed, n_max=40).polygon
H = random_windows(P, np.random.default_rng(seed), 5)
print(f"\nrandom polygon seed {seed}: {P.n} vertices, {len(H)} half-polygons")

t0 = time.perf_counter()
res = geodesic_center(P, H)
t1 = time.perf_counter()
print(f"solver: center {tuple(np.round(res.center, 6).tolist())}, radius {res.radius:.9f}, "
      f"determined by {res.determining}, {t1 - t0:.2f}s")

f = HalfPolygonRadius(P, H)
print(f"  oracle radius at the solver center: {f(np.array([res.center]))[0]:.9f}")
for n in (100, 300):
    pt, val, _ = grid_minimize(P, f, grid_for(P, n))
    print(f"  grid {n}: best cell {tuple(np.round(pt, 4).tolist())} value {val:.9f} (tolerance {2 * P.bbox_diag / n:.4f})")
