"""SVG rendering of an instance and its result.

The picture shows the polygon outline, the half-polygons shaded on their
side of each chord, the chords in red, the sites, the witness paths in
blue, and the center.  Output depends only on the inputs: fixed viewBox
(bounding box plus 5% margin), fixed number formatting, fixed style table.
Witness paths are the only <path> elements.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import quoteattr

from .halfpolygon import half_polygon
from .io import InstanceData

CANVAS = 800.0
MARGIN = 0.05

STYLE = {
    "outline": {"fill": "#f7f7f4", "stroke": "#222222", "stroke-width": "2"},
    "half": {"fill": "#d62728", "fill-opacity": "0.12", "stroke": "none"},
    "chord": {"stroke": "#d62728", "stroke-width": "2"},
    "witness": {"fill": "none", "stroke": "#1f77b4", "stroke-width": "2"},
    "site": {"fill": "#111111", "stroke": "none"},
    "center": {"fill": "#2ca02c", "stroke": "#111111", "stroke-width": "1"},
    "segment": {"stroke": "#2ca02c", "stroke-width": "3"},
}
SITE_R = 4.0
CENTER_R = 6.0


def _num(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _attrs(d: dict) -> str:
    return " ".join(f"{k}={quoteattr(v)}" for k, v in d.items())


class _View:
    def __init__(self, bbox):
        x0, y0, x1, y1 = bbox
        span = max(x1 - x0, y1 - y0, 1e-300)
        pad = MARGIN * span
        self.x0, self.y1 = x0 - pad, y1 + pad
        self.k = CANVAS / (span + 2 * pad)
        self.w = (x1 - x0 + 2 * pad) * self.k
        self.h = (y1 - y0 + 2 * pad) * self.k

    def __call__(self, p) -> str:
        # y grows downward in SVG
        return f"{_num((p[0] - self.x0) * self.k)},{_num((self.y1 - p[1]) * self.k)}"


def _halves_to_draw(inst: InstanceData, result: dict) -> list:
    if result.get("windows"):
        return [(w["p"], w["q"]) for w in result["windows"]]
    if inst.half_polygons:
        return list(inst.half_polygons)
    return [(d["p"], d["q"]) for d in result.get("determining") or ()]


def render_svg(inst: InstanceData, result: dict) -> str:
    """Standalone SVG document for an instance and a result object."""
    P = inst.polygon
    view = _View(P.bbox)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_num(view.w)} {_num(view.h)}" '
        f'width="{_num(view.w)}" height="{_num(view.h)}">',
    ]
    pts = " ".join(view(v) for v in inst.raw_polygon)
    out.append(f'  <polygon class="outline" points="{pts}" {_attrs(STYLE["outline"])}/>')
    for i, (p, q) in enumerate(_halves_to_draw(inst, result)):
        H = half_polygon(P, p, q, i)
        region = " ".join(view(v) for v in H.region.vertices)
        out.append(f'  <polygon class="half" points="{region}" {_attrs(STYLE["half"])}/>')
    for i, (p, q) in enumerate(_halves_to_draw(inst, result)):
        a, b = view(p).split(","), view(q).split(",")
        out.append(f'  <line class="chord" x1="{a[0]}" y1="{a[1]}" x2="{b[0]}" y2="{b[1]}" '
                   f'{_attrs(STYLE["chord"])}/>')
    for s in result.get("per_site") or ():
        path = s.get("path") or []
        if len(path) < 2:
            continue
        d = "M " + " L ".join(view(w) for w in path)
        out.append(f'  <path class="witness" d="{d}" {_attrs(STYLE["witness"])}/>')
    seg = result.get("degenerate_segment")
    if seg:
        a, b = view(seg[0]).split(","), view(seg[1]).split(",")
        out.append(f'  <line class="segment" x1="{a[0]}" y1="{a[1]}" x2="{b[0]}" y2="{b[1]}" '
                   f'{_attrs(STYLE["segment"])}/>')
    for u in inst.sites or ():
        x, y = view(u).split(",")
        out.append(f'  <circle class="site" cx="{x}" cy="{y}" r="{_num(SITE_R)}" {_attrs(STYLE["site"])}/>')
    c = result["center"]
    if all(math.isfinite(v) for v in c):
        x, y = view(c).split(",")
        out.append(f'  <circle class="center" cx="{x}" cy="{y}" r="{_num(CENTER_R)}" {_attrs(STYLE["center"])}/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
