"""Instance and result files.

Both are JSON objects with a version field.  Floats are written with 17
significant digits so that every double survives a round trip, and keys
keep a fixed order so identical inputs give identical bytes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .chord_oracle import EPS_TIE
from .errors import InvalidInstance, PointOutsidePolygon
from .geometry import Polygon, boundary_point, point_in_polygon, Location, validate_polygon, visible
from .halfpolygon import HalfPolygon, half_polygon

VERSION = 1


@dataclass(frozen=True, eq=False)
class InstanceData:
    raw_polygon: tuple          # vertices exactly as given
    polygon: Polygon
    sites: tuple | None = None
    half_polygons: tuple | None = None  # ((p, q), ...) as given

    def halves(self) -> list[HalfPolygon]:
        return [half_polygon(self.polygon, p, q, i) for i, (p, q) in enumerate(self.half_polygons or ())]


# ------------------------------------------------------------------ writing


def _fmt(x) -> str:
    if isinstance(x, bool) or x is None:
        return json.dumps(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if not math.isfinite(x):
        raise InvalidInstance(f"non-finite number {x}")
    if x == 0.0:
        return "0.0"
    s = format(x, ".17g")
    return s if any(c in s for c in ".en") else s + ".0"


def _is_point(v) -> bool:
    return isinstance(v, (list, tuple, np.ndarray)) and len(v) == 2 and all(
        isinstance(c, (int, float, np.floating, np.integer)) and not isinstance(c, bool) for c in v)


def dumps(obj, indent: int = 0) -> str:
    """JSON text with 17-digit floats; coordinate pairs stay on one line."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}{json.dumps(str(k))}: {dumps(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if _is_point(obj):
            return "[" + ", ".join(_fmt(c) for c in obj) + "]"
        items = [inner + dumps(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, str):
        return json.dumps(obj)
    return _fmt(obj)


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj) + "\n")


# ------------------------------------------------------------------ reading


def _point(v, what: str) -> tuple[float, float]:
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise InvalidInstance(f"{what}: expected [x, y], got {v!r}")
    try:
        x, y = float(v[0]), float(v[1])
    except (TypeError, ValueError):
        raise InvalidInstance(f"{what}: non-numeric coordinate in {v!r}") from None
    if not (math.isfinite(x) and math.isfinite(y)):
        raise InvalidInstance(f"{what}: non-finite coordinate in {v!r}")
    return x, y


def _on_boundary(P: Polygon, x, what: str):
    bp = boundary_point(P, x)
    if math.dist(bp.coords, x) > EPS_TIE * P.bbox_diag:
        raise InvalidInstance(f"{what}: {x} is not on the polygon boundary")
    return bp


def parse_instance(doc, need_constraints: bool = False) -> InstanceData:
    """Validate a decoded instance object."""
    if not isinstance(doc, dict):
        raise InvalidInstance("instance must be a JSON object")
    if doc.get("version", VERSION) != VERSION:
        raise InvalidInstance(f"unsupported version {doc.get('version')!r}")
    if "polygon" not in doc or not isinstance(doc["polygon"], list):
        raise InvalidInstance("missing polygon")
    raw = tuple(_point(v, f"polygon[{i}]") for i, v in enumerate(doc["polygon"]))
    P = validate_polygon(raw)
    sites = halves = None
    if doc.get("sites") is not None:
        sites = tuple(_point(v, f"sites[{i}]") for i, v in enumerate(doc["sites"]))
        for i, u in enumerate(sites):
            if point_in_polygon(P, u) is Location.OUTSIDE:
                raise PointOutsidePolygon(f"PointOutsidePolygon: sites[{i}] = {u}")
    if doc.get("half_polygons") is not None:
        out = []
        for i, h in enumerate(doc["half_polygons"]):
            if not isinstance(h, dict) or "p" not in h or "q" not in h:
                raise InvalidInstance(f"half_polygons[{i}]: expected {{p, q}}")
            p, q = _point(h["p"], f"half_polygons[{i}].p"), _point(h["q"], f"half_polygons[{i}].q")
            _on_boundary(P, p, f"half_polygons[{i}].p")
            _on_boundary(P, q, f"half_polygons[{i}].q")
            mid = (0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1]))
            if math.dist(p, q) <= P.tol or not visible(P, p, q) or point_in_polygon(P, mid) is not Location.INSIDE:
                raise InvalidInstance(f"half_polygons[{i}]: chord does not cross the interior")
            out.append((p, q))
        halves = tuple(out)
    if need_constraints and (sites is None) == (halves is None):
        raise InvalidInstance("exactly one of sites / half_polygons is required")
    return InstanceData(raw, P, sites, halves)


def load_instance(path, need_constraints: bool = False) -> InstanceData:
    """Read and validate an instance file; OSError propagates for I/O failures."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise InvalidInstance(f"malformed JSON: {err}") from None
    return parse_instance(doc, need_constraints)


def instance_doc(inst: InstanceData) -> dict:
    doc = {"version": VERSION, "polygon": [list(v) for v in inst.raw_polygon]}
    if inst.sites is not None:
        doc["sites"] = [list(u) for u in inst.sites]
    if inst.half_polygons is not None:
        doc["half_polygons"] = [{"p": list(p), "q": list(q)} for p, q in inst.half_polygons]
    return doc


def load_result(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise InvalidInstance(f"malformed JSON: {err}") from None
    if not isinstance(doc, dict) or "center" not in doc or "radius" not in doc:
        raise InvalidInstance("result file needs center and radius")
    _point(doc["center"], "center")
    for i, s in enumerate(doc.get("per_site") or ()):
        if not isinstance(s, dict) or "site" not in s or "path" not in s:
            raise InvalidInstance(f"per_site[{i}]: expected {{site, distance, path}}")
        for j, w in enumerate(s["path"]):
            _point(w, f"per_site[{i}].path[{j}]")
    return doc


# ------------------------------------------------------------------ results


def _xy(p) -> list:
    return [float(p[0]), float(p[1])]


def _descriptor(H: HalfPolygon, windows_by_id: dict) -> dict:
    d = {"id": int(H.id), "p": _xy(H.p.coords), "q": _xy(H.q.coords)}
    w = windows_by_id.get(H.id)
    if w is not None:
        d["site"] = _xy(w.source)
        d["reflex_vertex"] = _xy(H.polygon.vertices[w.fulcrum])
    return d


def result_doc(res, mode: str, seed: int, P: Polygon, per_site=None, windows=(),
               timings: dict | None = None) -> dict:
    """ResultFile object for a CenterResult (plus per-site data for visibility modes)."""
    halves = {H.id: H for H in res.half_polygons}
    wins = {w.half.id: w for w in windows}
    doc = {
        "version": VERSION,
        "method": "solver",
        "mode": mode,
        "center": _xy(res.center),
        "radius": float(res.radius),
        "determining": [_descriptor(halves[i], wins) for i in res.determining if i in halves],
        "degenerate_segment": None if res.degenerate_segment is None else [_xy(s) for s in res.degenerate_segment],
        "degenerate_ties": bool(res.degenerate_ties),
    }
    if per_site is not None:
        doc["per_site"] = [
            {"site": _xy(s.site), "distance": float(s.distance),
             "path": [] if s.path is None else [_xy(w) for w in s.path.waypoints]}
            for s in per_site
        ]
    if windows:
        doc["windows"] = [_descriptor(w.half, wins) for w in windows]
    doc["solver_seed"] = int(seed)
    doc["tolerances"] = {"geometry": float(P.tol), "tie": float(EPS_TIE * P.bbox_diag)}
    if timings is not None:
        doc["timings"] = {k: float(v) for k, v in timings.items()}
    return doc


def oracle_doc(mode: str, center, radius: float, grid: int, P: Polygon, timings: dict | None = None) -> dict:
    doc = {
        "version": VERSION,
        "method": "grid",
        "mode": mode,
        "center": _xy(center),
        "radius": float(radius),
        "determining": [],
        "degenerate_segment": None,
        "grid": int(grid),
        "cell": [float(c) for c in _cell(P, grid)],
        "tolerances": {"geometry": float(P.tol), "tie": float(EPS_TIE * P.bbox_diag)},
    }
    if timings is not None:
        doc["timings"] = {k: float(v) for k, v in timings.items()}
    return doc


def _cell(P: Polygon, grid: int):
    x0, y0, x1, y1 = P.bbox
    return (x1 - x0) / grid, (y1 - y0) / grid
