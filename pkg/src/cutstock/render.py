"""SVG drawings of packings, one file per sheet."""

from __future__ import annotations

from .model import Instance, Solution

_PALETTE = [
    "#7eb3e0", "#f4b183", "#a9d18e", "#d9a2d0", "#ffd966", "#9bd3d0",
    "#e57f7f", "#b6a6e3", "#c9b48a", "#8fc97e", "#e8a0b4", "#97b5a5",
]

_SCALE = 40
_MARGIN = 12


def render_sheet(instance: Instance, solution: Solution, sheet: int) -> str:
    """SVG 1.1 document for one sheet: outline, item rectangles, labels."""
    w = instance.sheet_width * _SCALE
    h = instance.sheet_height * _SCALE
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{w + 2 * _MARGIN}" height="{h + 2 * _MARGIN}" '
        f'viewBox="0 0 {w + 2 * _MARGIN} {h + 2 * _MARGIN}">',
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{w}" height="{h}" '
        'fill="white" stroke="black" stroke-width="2"/>',
    ]
    for p in solution.placements_on(sheet):
        pw = p.placed_width * _SCALE
        ph = p.placed_height * _SCALE
        px = _MARGIN + p.x * _SCALE
        # sheet origin is bottom-left, SVG's is top-left
        py = _MARGIN + h - (p.y + p.placed_height) * _SCALE
        color = _PALETTE[p.copy.type_index % len(_PALETTE)]
        parts.append(
            f'<rect x="{px}" y="{py}" width="{pw}" height="{ph}" '
            f'fill="{color}" stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{px + pw / 2:g}" y="{py + ph / 2:g}" font-size="14" '
            'font-family="sans-serif" text-anchor="middle" '
            f'dominant-baseline="middle">{p.copy.label()}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_solution(instance: Instance, solution: Solution) -> dict[int, str]:
    """Sheet number -> SVG text, for every used sheet."""
    return {
        sheet: render_sheet(instance, solution, sheet)
        for sheet in sorted({p.sheet for p in solution.placements})
    }
