"""Deterministic SVG rendering of patches.

Output bytes depend only on the patch and the style: fixed number
formatting, triangles in canonical patch order, no timestamps.  Fill
colors key on the triangle class; small triangles get one color per
distinct side length so the two small families are distinguishable.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .model import TilingPatch
from .structure import TriangleClass, classify

_LARGE_FILL = "#4c72b0"
_SMALL_FILLS = ("#dd8452", "#55a868", "#c9b458", "#8c564b")
_CLASS_FILLS = {
    TriangleClass.IMPROPER: "#c44e52",
    TriangleClass.OTHER: "#9467bd",
    TriangleClass.INDETERMINATE: "#d9d9d9",
}


@dataclass(frozen=True)
class RenderStyle:
    width: float = 800.0
    show_vertices: bool = False
    show_subdivision: bool = False
    labels: bool = False
    stroke: str = "#2f2f2f"


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def render_svg(patch: TilingPatch, destination, style: RenderStyle | None = None) -> None:
    """Write one SVG polygon per triangle, colored by class."""
    style = style or RenderStyle()
    x0, x1, y0, y1 = patch.window.bounds_floats()
    w, h = x1 - x0, y1 - y0
    scale = style.width / max(w, h)
    width_px = w * scale
    height_px = h * scale

    def to_px(x: float, y: float) -> tuple[float, float]:
        return ((x - x0) * scale, (y1 - y) * scale)

    # one color per distinct small side, stable across runs
    small_sides: list[float] = []
    classes = []
    for i in range(len(patch.triangles)):
        cls = classify(patch, i)
        classes.append(cls)
        if cls is TriangleClass.SMALL:
            s = round(patch.sq_side(i).to_float(), 12)
            if s not in small_sides:
                small_sides.append(s)
    small_sides.sort()

    def fill_for(i: int) -> str:
        cls = classes[i]
        if cls is TriangleClass.LARGE:
            return _LARGE_FILL
        if cls is TriangleClass.SMALL:
            s = round(patch.sq_side(i).to_float(), 12)
            return _SMALL_FILLS[small_sides.index(s) % len(_SMALL_FILLS)]
        return _CLASS_FILLS[cls]

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(width_px)}" height="{_fmt(height_px)}" '
        f'viewBox="0 0 {_fmt(width_px)} {_fmt(height_px)}">',
        f'<rect x="0" y="0" width="{_fmt(width_px)}" height="{_fmt(height_px)}" '
        f'fill="#ffffff"/>',
    ]
    stroke_w = max(0.35, style.width / 2000.0)
    for i, t in enumerate(patch.triangles):
        pts = " ".join("%s,%s" % tuple(map(_fmt, to_px(*v.to_floats())))
                       for v in t.vertices)
        parts.append(f'<polygon points="{pts}" fill="{fill_for(i)}" '
                     f'stroke="{style.stroke}" stroke-width="{_fmt(stroke_w)}"/>')
    if style.show_vertices:
        r = _fmt(stroke_w * 2.5)
        for vid in range(patch.n_vertices()):
            px, py = to_px(*patch.vertex_point(vid).to_floats())
            parts.append(f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="{r}" '
                         f'fill="#111111"/>')
    if style.show_subdivision:
        r = _fmt(stroke_w * 3.0)
        for i in range(len(patch.triangles)):
            for e in range(3):
                for _, vid in patch.edge_interior_vertices(i, e):
                    px, py = to_px(*patch.vertex_point(vid).to_floats())
                    parts.append(f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" '
                                 f'r="{r}" fill="none" stroke="#c44e52" '
                                 f'stroke-width="{_fmt(stroke_w)}"/>')
    if style.labels:
        for i, t in enumerate(patch.triangles):
            cx = sum(v.x.to_float() for v in t.vertices) / 3
            cy = sum(v.y.to_float() for v in t.vertices) / 3
            px, py = to_px(cx, cy)
            size = _fmt(max(6.0, scale * patch.sq_side(i).to_float() ** 0.5 * 0.25))
            parts.append(f'<text x="{_fmt(px)}" y="{_fmt(py)}" '
                         f'font-size="{size}" text-anchor="middle" '
                         f'fill="#000000">{i}</text>')
    parts.append("</svg>")
    data = "\n".join(parts) + "\n"
    if hasattr(destination, "write"):
        destination.write(data)
    else:
        Path(destination).write_text(data, encoding="utf-8")
