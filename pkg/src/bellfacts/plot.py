"""Self-contained SVG scatter of the (F3, F2) facts plane.

No plotting library is involved so the output is byte-stable for fixed input.
"""

from __future__ import annotations

from typing import Mapping, Sequence
from xml.sax.saxutils import escape, quoteattr

from .quantum import FactsTriple
from .strategies import boundary_lines
from .sweep import SweepRecord

SIZE = 400
MARGIN = 60


def to_canvas(f3: float, f2: float) -> tuple[float, float]:
    """Map facts coordinates to SVG pixels (F3 rightwards, F2 upwards)."""
    return MARGIN + f3 * SIZE, MARGIN + (1.0 - f2) * SIZE


def _num(x: float) -> str:
    return format(x + 0.0, ".3f")


def facts_plane_svg(records: Sequence[SweepRecord], states: Mapping[str, FactsTriple],
                    title: str = "Classical facts region") -> str:
    total = SIZE + 2 * MARGIN
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{total}" '
        f'viewBox="0 0 {total} {total}">',
        f"<title>{escape(title)}</title>",
        "<style>.classical{fill:#c0392b;fill-opacity:0.5}.state circle{fill:#000}"
        ".boundary{stroke:#2c3e50;stroke-width:1.5}.frame{fill:none;stroke:#000}"
        "text{font-family:sans-serif;font-size:12px}</style>",
        f'<rect class="frame" x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}"/>',
    ]
    for tick in (0.0, 0.5, 1.0):
        x, _ = to_canvas(tick, 0.0)
        _, y = to_canvas(0.0, tick)
        out.append(f'<text x="{_num(x)}" y="{_num(MARGIN + SIZE + 18)}" text-anchor="middle">{tick:g}</text>')
        out.append(f'<text x="{_num(MARGIN - 8)}" y="{_num(y + 4)}" text-anchor="end">{tick:g}</text>')
    out.append(f'<text x="{_num(MARGIN + SIZE / 2)}" y="{_num(MARGIN + SIZE + 40)}" text-anchor="middle">F3</text>')
    out.append(f'<text x="{_num(MARGIN - 40)}" y="{_num(MARGIN + SIZE / 2)}" text-anchor="middle">F2</text>')

    for name, line in zip(("upper", "lower"), boundary_lines()):
        x1, y1 = to_canvas(0.0, line(0.0))
        x2, y2 = to_canvas(1.0, line(1.0))
        out.append(f'<line class="boundary {name}" x1="{_num(x1)}" y1="{_num(y1)}" '
                   f'x2="{_num(x2)}" y2="{_num(y2)}"/>')

    out.append('<g id="classical">')
    for rec in records:
        x, y = to_canvas(rec.facts.f3, rec.facts.f2)
        out.append(f'<circle class="classical" cx="{_num(x)}" cy="{_num(y)}" r="2"/>')
    out.append("</g>")

    out.append('<g id="states">')
    for tag, f in states.items():
        x, y = to_canvas(f.f3, f.f2)
        out.append(f'<g class="state" data-state={quoteattr(tag)}>'
                   f'<circle cx="{_num(x)}" cy="{_num(y)}" r="4"/>'
                   f'<text x="{_num(x + 6)}" y="{_num(y - 6)}">{escape(tag)}</text></g>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
