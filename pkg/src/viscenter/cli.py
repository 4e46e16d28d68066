"""Command line: viscenter validate|center|oracle|svg|gen.

Exit codes: 0 ok, 2 invalid input, 3 I/O error, 4 degeneracy under --strict.
Errors go to standard error as one JSON object {"error": kind, "message": ...}.
The log level comes from the VISCENTER_LOG environment variable.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

import numpy as np

from .center import geodesic_center
from .errors import GeometryError
from .io import InstanceData, dumps, load_instance, load_result, oracle_doc, result_doc
from .oracle import grid_for, oracle_halfpolygon_radius, oracle_visibility_radius, random_instance, random_windows
from .svg import render_svg
from .visibility import visibility_center

EXIT_OK, EXIT_INVALID, EXIT_IO, EXIT_DEGENERATE = 0, 2, 3, 4

log = logging.getLogger("viscenter")


class _Fail(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code, self.kind = code, kind


def _emit(text: str, out: str | None) -> None:
    if out:
        try:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as err:
            raise _Fail(EXIT_IO, "IOError", str(err)) from None
    else:
        sys.stdout.write(text)


def _load(path: str, need_constraints: bool = False) -> InstanceData:
    try:
        return load_instance(path, need_constraints)
    except OSError as err:
        raise _Fail(EXIT_IO, "IOError", str(err)) from None
    except GeometryError as err:
        raise _Fail(EXIT_INVALID, type(err).__name__, str(err)) from None


def _mode(inst: InstanceData, mode: str | None) -> str:
    if mode is None:
        mode = "halfpolygon" if inst.half_polygons is not None else ("visibility" if inst.sites else "polygon")
    if mode == "halfpolygon" and not inst.half_polygons:
        raise _Fail(EXIT_INVALID, "InvalidInstance", "mode halfpolygon needs half_polygons")
    if mode == "visibility" and not inst.sites:
        raise _Fail(EXIT_INVALID, "InvalidInstance", "mode visibility needs sites")
    return mode


def _radius_text(r: float) -> str:
    return "0.000000000000" if r == 0 else "%#.12g" % r


def cmd_validate(args) -> int:
    inst = _load(args.path)
    print(json.dumps({"valid": True, "vertices": inst.polygon.n,
                      "sites": len(inst.sites or ()), "half_polygons": len(inst.half_polygons or ())}))
    return EXIT_OK


def cmd_center(args) -> int:
    inst = _load(args.path)
    mode = _mode(inst, args.mode)
    P = inst.polygon
    t0 = time.perf_counter()
    if mode == "halfpolygon":
        res = geodesic_center(P, inst.halves(), seed=args.seed)
        doc_args = dict(per_site=None, windows=())
    else:
        U = list(P.vertices) if mode == "polygon" else [np.array(u) for u in inst.sites]
        ans = visibility_center(P, U, seed=args.seed)
        res = ans.center
        doc_args = dict(per_site=ans.per_site, windows=ans.windows)
        worst = max((s.distance for s in ans.per_site), default=0.0)
        if abs(worst - res.radius) > args.tol * P.bbox_diag:
            log.warning("radius %.17g differs from the per-site maximum %.17g", res.radius, worst)
    timings = {"solve_s": time.perf_counter() - t0} if args.timings else None
    doc = result_doc(res, mode, args.seed, P, timings=timings, **doc_args)
    if args.out:
        _emit(dumps(doc) + "\n", args.out)
    print(_radius_text(res.radius))
    if args.strict and (res.degenerate_segment is not None or res.degenerate_ties):
        raise _Fail(EXIT_DEGENERATE, "Degenerate",
                    "the center is a segment" if res.degenerate_segment is not None else "more than three tight constraints")
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = _load(args.path)
    mode = _mode(inst, args.mode)
    P = inst.polygon
    t0 = time.perf_counter()
    grid = grid_for(P, args.grid)
    if mode == "halfpolygon":
        pt, val = oracle_halfpolygon_radius(P, inst.halves(), grid)
    else:
        U = list(P.vertices) if mode == "polygon" else [np.array(u) for u in inst.sites]
        pt, val = oracle_visibility_radius(P, U, grid)
    timings = {"oracle_s": time.perf_counter() - t0} if args.timings else None
    doc = oracle_doc(mode, pt, val, args.grid, P, timings)
    if args.out:
        _emit(dumps(doc) + "\n", args.out)
    print(_radius_text(val))
    return EXIT_OK


def cmd_svg(args) -> int:
    inst = _load(args.instance)
    try:
        result = load_result(args.result)
    except OSError as err:
        raise _Fail(EXIT_IO, "IOError", str(err)) from None
    except GeometryError as err:
        raise _Fail(EXIT_INVALID, type(err).__name__, str(err)) from None
    _emit(render_svg(inst, result), args.out)
    return EXIT_OK


def cmd_gen(args) -> int:
    inst = random_instance(args.seed, n_max=args.n_max, m_max=args.m_max)
    P = inst.polygon
    doc = {"version": 1, "polygon": [list(map(float, v)) for v in P.vertices]}
    if args.kind == "sites":
        doc["sites"] = [list(map(float, u)) for u in inst.sites]
    else:
        rng = np.random.default_rng(args.seed)
        halves = random_windows(P, rng, args.k)
        doc["half_polygons"] = [{"p": list(h.p.coords), "q": list(h.q.coords)} for h in halves]
    _emit(dumps(doc) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="viscenter", description="Visibility centers and geodesic centers of half-polygons.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check an instance file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    modes = ("visibility", "halfpolygon", "polygon")
    p = sub.add_parser("center", help="solve an instance")
    p.add_argument("path")
    p.add_argument("--mode", choices=modes)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-7, help="relative tolerance for consistency checks")
    p.add_argument("--out")
    p.add_argument("--strict", action="store_true", help="exit 4 when the center is degenerate")
    p.add_argument("--timings", action="store_true", help="record wall time (output is then not reproducible)")
    p.set_defaults(func=cmd_center)

    p = sub.add_parser("oracle", help="brute-force grid minimum")
    p.add_argument("path")
    p.add_argument("--mode", choices=modes)
    p.add_argument("--grid", type=int, default=300)
    p.add_argument("--out")
    p.add_argument("--timings", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("svg", help="draw an instance with its result")
    p.add_argument("instance")
    p.add_argument("result")
    p.add_argument("--out")
    p.set_defaults(func=cmd_svg)

    p = sub.add_parser("gen", help="write a seeded random instance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kind", choices=("sites", "halves"), default="sites")
    p.add_argument("--n-max", type=int, default=30)
    p.add_argument("--m-max", type=int, default=8)
    p.add_argument("--k", type=int, default=4, help="number of half-polygons for --kind halves")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)
    return ap


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("VISCENTER_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Fail as err:
        sys.stderr.write(json.dumps({"error": err.kind, "message": str(err)}) + "\n")
        return err.code


if __name__ == "__main__":
    sys.exit(main())
