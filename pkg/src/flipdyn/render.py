"""Deterministic SVG snapshots of configurations.

This is the only place where coordinates are converted to floats.
"""
from __future__ import annotations

from typing import Optional

from .configurations import Configuration, Flip
from .geometry import Color

_FILL = {Color.RED: "#d62728", Color.BLUE: "#1f77b4", None: "#222222"}


def render_svg(c: Configuration, highlight: Optional[Flip] = None, size: int = 400, margin: int = 20) -> str:
    """SVG with points as circles and segments as lines.

    With ``highlight``, its removed pair is drawn dashed and its added pair
    bold; removed segments are not drawn a second time.
    """
    pts = c.points
    xs = [float(p.x) for p in pts.values()]
    ys = [float(p.y) for p in pts.values()]
    x0, x1 = min(xs, default=0.0), max(xs, default=1.0)
    y0, y1 = min(ys, default=0.0), max(ys, default=1.0)
    span = max(x1 - x0, y1 - y0) or 1.0
    k = (size - 2 * margin) / span

    def xy(i):
        p = pts[i]
        return margin + (float(p.x) - x0) * k, size - margin - (float(p.y) - y0) * k

    def seg(s, style):
        (ax, ay), (bx, by) = xy(s[0]), xy(s[1])
        return f'<line x1="{ax:.3f}" y1="{ay:.3f}" x2="{bx:.3f}" y2="{by:.3f}" {style}/>'

    edges = list(c.edges)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">',
           f'<rect width="{size}" height="{size}" fill="white"/>']
    if highlight is not None:
        for s in highlight.removed:
            if s in edges:
                edges.remove(s)
    for s in edges:
        out.append(seg(s, 'stroke="#555555" stroke-width="1.5"'))
    if highlight is not None:
        for s in highlight.removed:
            out.append(seg(s, 'stroke="#555555" stroke-width="1.5" stroke-dasharray="6,4" class="removed"'))
        for s in highlight.added:
            out.append(seg(s, 'stroke="#000000" stroke-width="3.5" class="added"'))
    for i, p in pts.items():
        cx, cy = xy(i)
        out.append(f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="4" fill="{_FILL[p.color]}"><title>{i}</title></circle>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
