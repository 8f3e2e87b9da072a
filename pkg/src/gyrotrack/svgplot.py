"""Minimal static SVG line plots (axes, polylines, legend).

Hand-rolled on purpose: telemetry rendering needs nothing beyond a few
polylines, and this keeps the package free of plotting dependencies.
Long series are thinned to a fixed point budget before rendering.
"""

from dataclasses import dataclass, field

import numpy as np

_MAX_POINTS = 4000
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 56, 16, 28, 40


@dataclass
class Series:
    x: np.ndarray
    y: np.ndarray
    label: str = ""
    color: str = "#1f77b4"


@dataclass
class Panel:
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    series: list = field(default_factory=list)


def _thin(arr):
    if len(arr) <= _MAX_POINTS:
        return arr
    stride = int(np.ceil(len(arr) / _MAX_POINTS))
    return arr[::stride]


def _ticks(lo, hi, n=5):
    if hi <= lo:
        hi = lo + 1.0
    return np.linspace(lo, hi, n)


def _panel_svg(panel, width, height, y_offset):
    x0, y0 = _MARGIN_L, y_offset + _MARGIN_T
    pw = width - _MARGIN_L - _MARGIN_R
    ph = height - _MARGIN_T - _MARGIN_B

    xs = [_thin(np.asarray(s.x, dtype=float)) for s in panel.series]
    ys = [_thin(np.asarray(s.y, dtype=float)) for s in panel.series]
    xlo = min(float(x.min()) for x in xs)
    xhi = max(float(x.max()) for x in xs)
    ylo = min(float(y.min()) for y in ys)
    yhi = max(float(y.max()) for y in ys)
    if xhi == xlo:
        xhi = xlo + 1.0
    if yhi == ylo:
        yhi, ylo = ylo + 0.5, ylo - 0.5
    pad = 0.05 * (yhi - ylo)
    ylo, yhi = ylo - pad, yhi + pad

    def px(x):
        return x0 + pw * (x - xlo) / (xhi - xlo)

    def py(y):
        return y0 + ph * (1.0 - (y - ylo) / (yhi - ylo))

    parts = [
        f'<rect x="{x0}" y="{y0}" width="{pw}" height="{ph}" '
        f'fill="none" stroke="#444" stroke-width="1"/>',
        f'<text x="{x0 + pw / 2:.1f}" y="{y0 - 9}" text-anchor="middle" '
        f'font-size="13" font-family="sans-serif">{panel.title}</text>',
        f'<text x="{x0 + pw / 2:.1f}" y="{y0 + ph + 32}" text-anchor="middle" '
        f'font-size="11" font-family="sans-serif">{panel.xlabel}</text>',
        f'<text x="{x0 - 44}" y="{y0 + ph / 2:.1f}" text-anchor="middle" '
        f'font-size="11" font-family="sans-serif" '
        f'transform="rotate(-90 {x0 - 44} {y0 + ph / 2:.1f})">{panel.ylabel}</text>',
    ]
    for tx in _ticks(xlo, xhi):
        parts.append(f'<line x1="{px(tx):.1f}" y1="{y0 + ph}" x2="{px(tx):.1f}" '
                     f'y2="{y0 + ph + 4}" stroke="#444"/>')
        parts.append(f'<text x="{px(tx):.1f}" y="{y0 + ph + 16}" '
                     f'text-anchor="middle" font-size="10" '
                     f'font-family="sans-serif">{tx:.3g}</text>')
    for ty in _ticks(ylo, yhi):
        parts.append(f'<line x1="{x0 - 4}" y1="{py(ty):.1f}" x2="{x0}" '
                     f'y2="{py(ty):.1f}" stroke="#444"/>')
        parts.append(f'<text x="{x0 - 6}" y="{py(ty):.1f}" text-anchor="end" '
                     f'dominant-baseline="middle" font-size="10" '
                     f'font-family="sans-serif">{ty:.3g}</text>')

    for s, x, y in zip(panel.series, xs, ys):
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
        parts.append(f'<polyline points="{pts}" fill="none" '
                     f'stroke="{s.color}" stroke-width="1.2"/>')

    lx, ly = x0 + pw - 8, y0 + 14
    for k, s in enumerate(panel.series):
        if not s.label:
            continue
        yy = ly + 14 * k
        parts.append(f'<line x1="{lx - 60}" y1="{yy - 4}" x2="{lx - 40}" '
                     f'y2="{yy - 4}" stroke="{s.color}" stroke-width="2"/>')
        parts.append(f'<text x="{lx - 36}" y="{yy}" font-size="10" '
                     f'font-family="sans-serif">{s.label}</text>')
    return parts


def write_svg(path, panels, width=720, panel_height=260):
    """Write stacked panels of line plots to an SVG file."""
    panels = list(panels)
    total_h = panel_height * len(panels)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
             f'height="{total_h}" viewBox="0 0 {width} {total_h}">',
             f'<rect width="{width}" height="{total_h}" fill="white"/>']
    for k, panel in enumerate(panels):
        parts.extend(_panel_svg(panel, width, panel_height, k * panel_height))
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
