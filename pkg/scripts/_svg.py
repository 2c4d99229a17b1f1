"""Minimal hand-rolled SVG scatter, shared by the campaign scripts.

Decoration only: every number that matters is in the CSVs.
"""

from __future__ import annotations

from pathlib import Path

SIZE = 440
PAD = 50


def _px(u: float) -> float:
    return PAD + u * (SIZE - 2 * PAD)


def _py(v: float) -> float:
    return SIZE - PAD - v * (SIZE - 2 * PAD)


def scatter_svg(path, points, xlabel: str, ylabel: str, diagonal: bool = True):
    """Scatter of (x, y) pairs with both axes fixed to [0, 1]."""
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" '
        f'height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>',
        f'<line x1="{_px(0)}" y1="{_py(0)}" x2="{_px(1)}" y2="{_py(0)}" '
        'stroke="black"/>',
        f'<line x1="{_px(0)}" y1="{_py(0)}" x2="{_px(0)}" y2="{_py(1)}" '
        'stroke="black"/>',
    ]
    for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
        parts.append(
            f'<text x="{_px(tick)}" y="{SIZE - PAD + 16}" font-size="10" '
            f'text-anchor="middle">{tick:g}</text>'
        )
        parts.append(
            f'<text x="{PAD - 8}" y="{_py(tick) + 3}" font-size="10" '
            f'text-anchor="end">{tick:g}</text>'
        )
    if diagonal:
        parts.append(
            f'<line x1="{_px(0)}" y1="{_py(0)}" x2="{_px(1)}" y2="{_py(1)}" '
            'stroke="#999" stroke-dasharray="4 3"/>'
        )
    for x, y in points:
        x = min(max(x, 0.0), 1.0)
        y = min(max(y, 0.0), 1.0)
        parts.append(
            f'<circle cx="{_px(x):.1f}" cy="{_py(y):.1f}" r="3" '
            'fill="steelblue" fill-opacity="0.6"/>'
        )
    parts.append(
        f'<text x="{SIZE / 2}" y="{SIZE - 12}" font-size="12" '
        f'text-anchor="middle">{xlabel}</text>'
    )
    parts.append(
        f'<text x="14" y="{SIZE / 2}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 14 {SIZE / 2})">{ylabel}</text>'
    )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")
