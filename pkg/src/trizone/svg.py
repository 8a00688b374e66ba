"""Minimal deterministic SVG phase portraits (no plotting dependency)."""

from __future__ import annotations

import numpy as np

ZONE_FILL = ("#f3eee7", "#ffffff", "#e9f0f3")
ORBIT_STROKE = "#9a9a9a"
CYCLE_STROKES = ("#c23b22", "#1f5fa8", "#3c8031", "#8a4b9c")


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def phase_portrait_svg(orbits: list[np.ndarray], cycles: list[np.ndarray],
                       width: int = 720, height: int = 540,
                       bbox: tuple[float, float, float, float] | None = None) -> str:
    """Zones shaded, switching lines dashed, cycles stroked distinctly."""
    pts = [p for p in orbits + cycles if len(p)]
    if bbox is None:
        if pts:
            allp = np.vstack(pts)
            xmin, ymin = allp.min(axis=0)
            xmax, ymax = allp.max(axis=0)
        else:
            xmin, ymin, xmax, ymax = -2.0, -2.0, 2.0, 2.0
        xmin = min(xmin, -1.5)
        xmax = max(xmax, 1.5)
        padx = 0.08 * (xmax - xmin) or 1.0
        pady = 0.08 * (ymax - ymin) or 1.0
        bbox = (xmin - padx, ymin - pady, xmax + padx, ymax + pady)
    x0, y0, x1, y1 = bbox
    sx = width / (x1 - x0)
    sy = height / (y1 - y0)

    def X(x):
        return _fmt((x - x0) * sx)

    def Y(y):
        return _fmt(height - (y - y0) * sy)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
           f'height="{height}" viewBox="0 0 {width} {height}">']
    for (lo, hi), fill in zip(((x0, -1.0), (-1.0, 1.0), (1.0, x1)), ZONE_FILL):
        lo_c, hi_c = max(lo, x0), min(hi, x1)
        if hi_c > lo_c:
            out.append(f'<rect x="{X(lo_c)}" y="0" '
                       f'width="{_fmt((hi_c - lo_c) * sx)}" height="{height}" '
                       f'fill="{fill}"/>')
    for xl in (-1.0, 1.0):
        out.append(f'<line x1="{X(xl)}" y1="0" x2="{X(xl)}" y2="{height}" '
                   f'stroke="#555555" stroke-dasharray="6,4" stroke-width="1"/>')

    def path(poly, stroke, swidth):
        d = "M" + " L".join(f"{X(x)},{Y(y)}" for x, y in poly)
        return f'<path d="{d}" fill="none" stroke="{stroke}" stroke-width="{swidth}"/>'

    for poly in orbits:
        if len(poly) > 1:
            out.append(path(poly[:: max(1, len(poly) // 1200)], ORBIT_STROKE, 0.8))
    for k, poly in enumerate(cycles):
        if len(poly) > 1:
            stroke = CYCLE_STROKES[k % len(CYCLE_STROKES)]
            out.append(path(poly[:: max(1, len(poly) // 2400)] , stroke, 1.8))
    out.append("</svg>")
    return "\n".join(out)
