"""SVG and ASCII renderings of diagrams and heaps.

Dot loops are stacked on the left, other loops sit in the middle of the
box.  With a single cup the decorations on the propagating edges and the
single-mark loops are placed at the heights recorded in the diagram.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from .diagrams import CIRC, DOT, Diagram, render_text
from .heaps import Heap

STEP = 48
TOP = 24
HEIGHT = 220
MARK = 5


def render_ascii(obj: Diagram | Heap) -> str:
    if isinstance(obj, Heap):
        return obj.ascii()
    return render_text(obj)


def _bezier(p, t):
    (x0, y0), (x1, y1), (x2, y2), (x3, y3) = p
    a, b, c, d = (1 - t) ** 3, 3 * t * (1 - t) ** 2, 3 * t * t * (1 - t), t**3
    return a * x0 + b * x1 + c * x2 + d * x3, a * y0 + b * y1 + c * y2 + d * y3


def _curve(d: Diagram, u: int, v: int):
    """Control points of the edge from u to v."""
    bottom = TOP + HEIGHT
    x = lambda node: STEP * abs(node)
    if u > 0 and v > 0:
        depth = 18 + 14 * abs(v - u)
        return ((x(u), TOP), (x(u), TOP + depth), (x(v), TOP + depth), (x(v), TOP))
    if u < 0 and v < 0:
        depth = 18 + 14 * abs(abs(v) - abs(u))
        return ((x(u), bottom), (x(u), bottom - depth), (x(v), bottom - depth), (x(v), bottom))
    mid = TOP + HEIGHT / 2
    return ((x(u), TOP), (x(u), mid), (x(v), mid), (x(v), bottom))


def _mark_svg(kind: str, cx: float, cy: float) -> str:
    if kind == DOT:
        return f'<circle cx="{cx:.1f}" cy="{cy:.1f}" r="{MARK}" fill="black"/>'
    if kind == CIRC:
        return f'<circle cx="{cx:.1f}" cy="{cy:.1f}" r="{MARK}" fill="white" stroke="black"/>'
    pts = f"{cx:.1f},{cy - MARK:.1f} {cx - MARK:.1f},{cy + MARK:.1f} {cx + MARK:.1f},{cy + MARK:.1f}"
    return f'<polygon points="{pts}" fill="white" stroke="black"/>'


def _y_at(p, y):
    """Point of a monotone propagating curve at height y (bisection on t)."""
    lo, hi = 0.0, 1.0
    for _ in range(40):
        mid = (lo + hi) / 2
        if _bezier(p, mid)[1] < y:
            lo = mid
        else:
            hi = mid
    return _bezier(p, (lo + hi) / 2)


def render_svg(d: Diagram) -> str:
    width = STEP * (d.k + 1) + 40
    height = TOP * 2 + HEIGHT
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="{STEP / 2:.1f}" y="{TOP}" width="{STEP * d.k:.1f}" height="{HEIGHT}" fill="none" stroke="#888" stroke-dasharray="4 3"/>',
        f"<title>{escape(render_text(d))}</title>",
    ]
    levels = {}
    if d.heights:
        for idx, token in enumerate(d.heights):
            levels[idx] = TOP + HEIGHT * (idx + 1) / (len(d.heights) + 1)
    marks = []
    for u, v, dec in d.edges:
        p = _curve(d, u, v)
        parts.append(
            f'<path d="M {p[0][0]} {p[0][1]} C {p[1][0]} {p[1][1]}, {p[2][0]} {p[2][1]}, {p[3][0]} {p[3][1]}" fill="none" stroke="black" stroke-width="2"/>'
        )
        if d.heights and u > 0 > v:
            ys = [levels[i] for i, (o, _) in enumerate(d.heights) if o == u]
            for kind, y in zip(dec, ys):
                marks.append(_mark_svg(kind, *_y_at(p, y)))
        else:
            for q, kind in enumerate(dec):
                marks.append(_mark_svg(kind, *_bezier(p, (q + 1) / (len(dec) + 1))))
    loop_tokens = [i for i, (o, _) in enumerate(d.heights or ()) if o == 0]
    dot_loops = [lp for lp in d.loops if set(lp) == {DOT}]
    other_loops = [lp for lp in d.loops if set(lp) != {DOT}]
    for q, lp in enumerate(dot_loops):
        dot_tokens = [i for i in loop_tokens if d.heights[i][1] == DOT]
        y = levels[dot_tokens[q]] if q < len(dot_tokens) else TOP + 30 + 34 * q
        parts.append(f'<ellipse cx="{STEP * 0.5 + 14:.1f}" cy="{y:.1f}" rx="10" ry="14" fill="none" stroke="black" stroke-width="2"/>')
        marks.append(_mark_svg(DOT, STEP * 0.5 + 4, y))
    for q, lp in enumerate(other_loops):
        cx = STEP * (d.k + 1) / 2 + 30 * (q - (len(other_loops) - 1) / 2)
        cy = TOP + HEIGHT / 2
        if d.heights and lp in [(x,) for o, x in d.heights if o == 0]:
            idx = [i for i in loop_tokens if d.heights[i][1] == lp[0]][0]
            cx, cy = STEP * (d.k + 0.5) - 14, levels[idx]
        parts.append(f'<ellipse cx="{cx:.1f}" cy="{cy:.1f}" rx="14" ry="10" fill="none" stroke="black" stroke-width="2"/>')
        for r, kind in enumerate(lp):
            ang = r / len(lp)
            marks.append(_mark_svg(kind, cx - 14 + 28 * ang if len(lp) > 1 else cx - 14, cy))
    for i in range(1, d.k + 1):
        parts.append(f'<text x="{STEP * i}" y="{TOP - 8}" font-size="11" text-anchor="middle">{i}</text>')
        parts.append(f'<text x="{STEP * i}" y="{TOP + HEIGHT + 18}" font-size="11" text-anchor="middle">{i}\'</text>')
    parts.extend(marks)
    parts.append("</svg>")
    return "\n".join(parts)
