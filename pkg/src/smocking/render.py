"""SVG drawings of patterns and paths (1 user unit = 1 plane unit)."""

from __future__ import annotations

from typing import Iterable

from .metric import Path
from .pattern import Pattern

STITCH_WIDTH = 0.16
PATH_WIDTH = 0.07
COLORS = ("#c0392b", "#2471a3", "#1e8449", "#7d3c98", "#b9770e")


def _n(v: float) -> str:
    return f"{v:.6g}"


def render_svg(pattern: Pattern, paths: Iterable[Path] = (), margin: float = 1.5) -> str:
    """Stitches as thick lines, each path segment as an arrowed polyline.

    The origin is at the centre of the view box and the y axis points up.
    """
    paths = list(paths)
    r = pattern.window_radius + margin
    for p in paths:
        for s in p.segments:
            r = max(r, *(abs(c) + margin for c in (*s.start, *s.end)))
    size = 2 * r
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_n(-r)} {_n(-r)} {_n(size)} {_n(size)}" '
        f'width="{_n(size * 20)}" height="{_n(size * 20)}">',
        "<defs>",
    ]
    for i, color in enumerate(COLORS):
        out.append(
            f'<marker id="arrow{i}" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="4" '
            f'markerHeight="4" orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z" '
            f'fill="{color}"/></marker>')
    out.append("</defs>")
    out.append('<rect x="{0}" y="{0}" width="{1}" height="{1}" fill="white"/>'.format(_n(-r), _n(size)))
    out.append('<g transform="scale(1,-1)">')
    out.append('<g class="stitches" stroke="black" stroke-linecap="butt" '
               f'stroke-width="{_n(STITCH_WIDTH)}">')
    for st in pattern.stitches:
        a, b = st.segment.start, st.segment.end
        out.append(f'<line x1="{_n(a.x)}" y1="{_n(a.y)}" x2="{_n(b.x)}" y2="{_n(b.y)}"/>')
    out.append("</g>")
    for i, p in enumerate(paths):
        color = COLORS[i % len(COLORS)]
        out.append(f'<g class="path" fill="none" stroke="{color}" stroke-width="{_n(PATH_WIDTH)}">')
        for s in p.segments:
            out.append(f'<polyline points="{_n(s.start.x)},{_n(s.start.y)} {_n(s.end.x)},{_n(s.end.y)}" '
                       f'marker-end="url(#arrow{i % len(COLORS)})"/>')
        out.append("</g>")
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
