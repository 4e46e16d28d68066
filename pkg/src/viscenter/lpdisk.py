"""Smallest radius rho and point x with every constraint f_i(x) <= rho.

Constraints are half-planes (f = a.x - b, the distance to {a.x <= b} from
outside) and disks (f = |x - u| + kappa).  A floor rho >= 0 is always
present.  The problem is LP-type with combinatorial dimension 3; it is
solved by seeded randomized incremental basis improvement (each step
raises the optimum of the basis in the order (rho, distance to the
witness)), and bases of at most 4 constraints are found by enumerating
closed-form solutions of every subset of size at most 3.  Ties in x are
broken toward a witness point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyConstraintSet


@dataclass(frozen=True, eq=False)
class HalfPlane:
    a: np.ndarray
    b: float
    id: int = -1

    def value(self, x) -> float:
        return float(self.a @ np.asarray(x, dtype=float)) - self.b


@dataclass(frozen=True, eq=False)
class Disk:
    u: np.ndarray
    kappa: float
    id: int = -1

    def value(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return math.hypot(*(x - self.u)) + self.kappa


def half_plane(a, b, id: int = -1) -> HalfPlane:
    a = np.asarray(a, dtype=float)
    n = math.hypot(*a)
    return HalfPlane(a / n, float(b) / n, id)


def disk(u, kappa: float = 0.0, id: int = -1) -> Disk:
    return Disk(np.asarray(u, dtype=float), float(kappa), id)


class _Floor:
    """rho >= 0."""

    id = None

    def value(self, x) -> float:
        return 0.0


_FLOOR = _Floor()
VIOLATION_TOL = 1e-12
_FEAS_TOL = 1e-9


@dataclass(frozen=True)
class _Sol:
    x: np.ndarray
    rho: float


def _norm_constraints(cons, w, s):
    out = []
    for c in cons:
        if isinstance(c, HalfPlane):
            out.append(HalfPlane(c.a, (c.b - float(c.a @ w)) / s, c.id))
        elif isinstance(c, Disk):
            out.append(Disk((c.u - w) / s, c.kappa / s, c.id))
        else:
            out.append(c)
    return out


def _feasible(sol: _Sol, group, tol=_FEAS_TOL) -> bool:
    return all(c.value(sol.x) <= sol.rho + tol for c in group)


def _rows(group):
    """Linear rows (coefficients on x, y, rho | rhs) and the first disk, for tight equalities."""
    rows, disks = [], [c for c in group if isinstance(c, Disk)]
    for c in group:
        if isinstance(c, HalfPlane):
            rows.append((np.array([c.a[0], c.a[1], -1.0]), c.b))
        elif c is _FLOOR:
            rows.append((np.array([0.0, 0.0, 1.0]), 0.0))
    if disks:
        d1 = disks[0]
        for d in disks[1:]:
            coef = np.array([-2 * (d1.u[0] - d.u[0]), -2 * (d1.u[1] - d.u[1]), 2 * (d1.kappa - d.kappa)])
            rhs = -(d1.u @ d1.u - d.u @ d.u) + (d1.kappa ** 2 - d.kappa ** 2)
            rows.append((coef, float(rhs)))
    return rows, (disks[0] if disks else None)


def _tight_three(group) -> list:
    rows, d1 = _rows(group)
    A = np.array([r[0] for r in rows])
    rhs = np.array([r[1] for r in rows])
    out = []
    if d1 is None:
        if abs(np.linalg.det(A)) <= 1e-12:
            return []
        z = np.linalg.solve(A, rhs)
        return [z]
    if len(rows) != 2:
        return []
    w = np.cross(A[0], A[1])
    if np.linalg.norm(w) <= 1e-12:
        return []
    z0 = np.linalg.lstsq(A, rhs, rcond=None)[0]
    u, k = d1.u, d1.kappa

    # |x - u|^2 - (rho - kappa)^2 = 0 along z0 + s w
    p0 = z0 - np.array([u[0], u[1], k])
    qa = w[0] ** 2 + w[1] ** 2 - w[2] ** 2
    qb = 2 * (p0[0] * w[0] + p0[1] * w[1] - p0[2] * w[2])
    qc = p0[0] ** 2 + p0[1] ** 2 - p0[2] ** 2
    for s in _roots(qa, qb, qc):
        out.append(z0 + s * w)
    return out


def _roots(a, b, c) -> list:
    scale = max(abs(a), abs(b), abs(c))
    if scale == 0:
        return []
    if abs(a) <= 1e-13 * scale:
        return [-c / b] if abs(b) > 1e-13 * scale else []
    disc = b * b - 4 * a * c
    if disc < 0:
        if disc >= -1e-10 * (b * b + abs(4 * a * c)):
            disc = 0.0
        else:
            return []
    r = math.sqrt(disc)
    qq = -0.5 * (b + math.copysign(r, b))
    if qq == 0:
        return [0.0]
    return [qq / a, c / qq]


def _candidates(group) -> list:
    """Optimal points of the subset with every member tight (closed-form case analysis)."""
    hp = [c for c in group if isinstance(c, HalfPlane)]
    dk = [c for c in group if isinstance(c, Disk)]
    fl = any(c is _FLOOR for c in group)
    out = []
    if len(group) == 1:
        if fl:
            out.append(_Sol(np.zeros(2), 0.0))
        elif dk:
            out.append(_Sol(dk[0].u.copy(), dk[0].kappa))
        return out
    if len(group) == 2:
        if fl and hp:
            a, b = hp[0].a, hp[0].b
            # nearest point to the witness (origin) on a.x = b
            out.append(_Sol(a * b, 0.0))
        elif fl and dk:
            if abs(dk[0].kappa) <= 1e-15:
                out.append(_Sol(dk[0].u.copy(), 0.0))
        elif len(hp) == 2:
            a1, b1, a2, b2 = hp[0].a, hp[0].b, hp[1].a, hp[1].b
            if float(a1 @ a2) <= -1 + 1e-12:
                rho = -(b1 + b2) / 2
                out.append(_Sol(a1 * (b1 + rho), rho))
        elif hp and dk:
            a, b, u, k = hp[0].a, hp[0].b, dk[0].u, dk[0].kappa
            gap = float(a @ u) - b
            if gap >= k:
                rho = (gap + k) / 2
                out.append(_Sol(u - (rho - k) * a, rho))
        elif len(dk) == 2:
            d1, d2 = dk
            L = math.hypot(*(d2.u - d1.u))
            t = (L + d2.kappa - d1.kappa) / 2
            if L > 0 and -1e-15 <= t <= L + 1e-15:
                out.append(_Sol(d1.u + t * (d2.u - d1.u) / L, t + d1.kappa))
        return out
    for z in _tight_three(group):
        x, rho = np.array(z[:2]), float(z[2])
        if any(rho < d.kappa - 1e-12 for d in dk):
            continue
        if rho < -1e-12:
            continue
        out.append(_Sol(x, max(rho, 0.0)))
    return out


def _better(s1: _Sol, s2: _Sol | None) -> bool:
    if s2 is None:
        return True
    if s1.rho < s2.rho - 1e-12:
        return True
    if s1.rho > s2.rho + 1e-12:
        return False
    return float(s1.x @ s1.x) < float(s2.x @ s2.x) - 1e-15


def _basis(group):
    """Optimum of a set of at most 4 constraints and a basis (subset of size <= 3) for it."""
    best, best_sub = None, None
    members = list(group) if any(c is _FLOOR for c in group) else list(group) + [_FLOOR]
    for size in (1, 2, 3):
        for sub in itertools.combinations(members, size):
            for sol in _candidates(sub):
                if _feasible(sol, members) and _better(sol, best):
                    best, best_sub = sol, sub
    if best is None:
        best, best_sub = _fallback(members)
    return best, tuple(best_sub)


def _fallback(members):
    """Direct numerical minimisation of max f_i, used only if no closed-form candidate is feasible."""
    from scipy.optimize import minimize

    def F(x):
        return max(c.value(x) for c in members)

    res = minimize(F, np.zeros(2), method="Nelder-Mead", options={"xatol": 1e-13, "fatol": 1e-13, "maxiter": 4000})
    x = np.asarray(res.x)
    return _Sol(x, max(F(x), 0.0)), tuple(members)


def _violates(c, sol: _Sol) -> bool:
    return c.value(sol.x) > sol.rho + VIOLATION_TOL


def _solve(H: list, rng: np.random.Generator):
    """Seeded randomized incremental basis improvement; returns (solution, basis)."""
    order = list(H)
    rng.shuffle(order)
    sol, basis = _basis((_FLOOR,))
    while True:
        changed = False
        for h in order:
            if h in basis or not _violates(h, sol):
                continue
            new_sol, new_basis = _basis(tuple(basis) + (h,))
            if not _better(sol, new_sol):
                continue  # no lexicographic progress: the violation is rounding noise
            sol, basis = new_sol, new_basis
            changed = True
        if not changed:
            return sol, basis


def min_feasible_disk(constraints, witness=None, seed: int = 0):
    """Minimise rho subject to all constraints; returns (x, rho, basis constraints)."""
    cons = [c for c in constraints]
    if not cons:
        raise EmptyConstraintSet("no constraints")
    w = np.zeros(2) if witness is None else np.asarray(witness, dtype=float)
    scale = _scale(cons, w)
    norm = _norm_constraints(cons, w, scale)
    back = {id(n): c for n, c in zip(norm, cons)}
    rng = np.random.default_rng(seed)
    sol, basis = _solve(norm, rng)
    real = [back[id(c)] for c in basis if c is not _FLOOR]
    x, rho = w + scale * sol.x, scale * sol.rho
    # recompute from the basis alone, so that replaying the basis gives identical bits
    fx, frho, fbasis = _from_basis(real, w)
    if all(c.value(fx) <= frho + _FEAS_TOL * scale for c in cons) and frho <= rho + _FEAS_TOL * scale:
        return fx, frho, fbasis
    return x, rho, real


def _scale(cons, w) -> float:
    scale = 1.0
    for c in cons:
        if isinstance(c, Disk):
            scale = max(scale, math.hypot(*(c.u - w)) + c.kappa)
        else:
            scale = max(scale, abs(c.b - float(c.a @ w)))
    return scale


def _canonical_key(c):
    if isinstance(c, HalfPlane):
        return (0, float(c.a[0]), float(c.a[1]), float(c.b))
    return (1, float(c.u[0]), float(c.u[1]), float(c.kappa))


def _from_basis(basis, w):
    """Optimum of a basis in a normalisation that depends on the basis only."""
    if not basis:
        return w.copy(), 0.0, []
    ordered = sorted(basis, key=_canonical_key)
    scale = _scale(ordered, w)
    norm = _norm_constraints(ordered, w, scale)
    back = {id(n): c for n, c in zip(norm, ordered)}
    sol, sub = _basis(tuple(norm))
    return w + scale * sol.x, scale * sol.rho, [back[id(c)] for c in sub if c is not _FLOOR]
