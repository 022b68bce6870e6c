"""SVG pictures of arc sets in the horizontal-line model.

Integers sit on a baseline, finite arcs are semicircles above it and infinite
arcs are straight segments to the point -inf drawn above the middle of the
line. Coordinates are fixed functions of the region, so equal input gives
byte-identical output.
"""

from __future__ import annotations

from typing import Iterable

from infgon.arcs import Arc
from infgon.triangulation import ArcSetDescriptor, restrict

UNIT = 40
INF_HEIGHT = 120
MARGIN = 20
LABEL_SPACE = 20


def _num(v: float) -> str:
    text = f"{v:.2f}".rstrip("0").rstrip(".")
    return "0" if text == "-0" else text


def _inside(x: Arc, lo: int, hi: int) -> bool:
    return lo <= x.b <= hi and (x.is_infinite or x.a >= lo)


def render_arcs(
    arcs: Iterable[Arc],
    region: tuple[int, int] | None,
    highlight: Iterable[Arc] = (),
    unit: int = UNIT,
) -> str:
    """SVG document for ``arcs`` on ``region``; arcs leaving the region are dropped.

    Arcs listed in ``highlight`` are dashed. ``region=None`` is the empty
    region: an empty canvas.
    """
    if region is None:
        return (
            '<svg xmlns="http://www.w3.org/2000/svg" width="0" height="0" viewBox="0 0 0 0">\n'
            "</svg>\n"
        )
    lo, hi = region
    if lo > hi:
        raise ValueError("region must satisfy lo <= hi")
    marked = set(highlight)
    shown = sorted({x for x in arcs if _inside(x, lo, hi)})
    tallest = max([INF_HEIGHT] + [(x.b - x.a) * unit / 2 for x in shown if x.is_finite])
    width = 2 * MARGIN + (hi - lo) * unit
    base = MARGIN + tallest
    height = base + LABEL_SPACE + MARGIN

    def px(n: int) -> float:
        return MARGIN + (n - lo) * unit

    inf_x = (px(lo) + px(hi)) / 2
    inf_y = base - INF_HEIGHT
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(width)}" height="{_num(height)}" '
        f'viewBox="0 0 {_num(width)} {_num(height)}">',
        f'<line class="baseline" x1="{_num(px(lo) - MARGIN / 2)}" y1="{_num(base)}" '
        f'x2="{_num(px(hi) + MARGIN / 2)}" y2="{_num(base)}" stroke="black"/>',
    ]
    for x in shown:
        dash = ' stroke-dasharray="6 4"' if x in marked else ""
        if x.is_infinite:
            out.append(
                f'<line class="arc infinite" x1="{_num(inf_x)}" y1="{_num(inf_y)}" '
                f'x2="{_num(px(x.b))}" y2="{_num(base)}" stroke="black" fill="none"{dash}/>'
            )
        else:
            r = (x.b - x.a) * unit / 2
            out.append(
                f'<path class="arc finite" d="M {_num(px(x.a))} {_num(base)} A {_num(r)} {_num(r)} 0 0 1 '
                f'{_num(px(x.b))} {_num(base)}" stroke="black" fill="none"{dash}/>'
            )
    for n in range(lo, hi + 1):
        out.append(f'<circle class="point" cx="{_num(px(n))}" cy="{_num(base)}" r="3" fill="black"/>')
        out.append(
            f'<text x="{_num(px(n))}" y="{_num(base + LABEL_SPACE - 4)}" font-size="12" '
            f'text-anchor="middle">{n}</text>'
        )
    if any(x.is_infinite for x in shown):
        out.append(f'<circle class="point infinity" cx="{_num(inf_x)}" cy="{_num(inf_y)}" r="4" fill="black"/>')
        out.append(
            f'<text x="{_num(inf_x)}" y="{_num(inf_y - 8)}" font-size="12" text-anchor="middle">-inf</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_descriptor(
    d: ArcSetDescriptor,
    region: tuple[int, int] | None = None,
    highlight: Iterable[Arc] = (),
    unit: int = UNIT,
) -> str:
    """Materialize ``d`` on ``region`` (default: window widened by 2) and draw it."""
    if region is None:
        region = (d.lo - 2, d.hi + 2)
    return render_arcs(restrict(d, region), region, highlight, unit)
