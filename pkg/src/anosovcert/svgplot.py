"""Minimal hand-written SVG scatter plots: data points plus one fitted line.

No plotting dependency; output is deterministic for fixed input (element
order and formatting are fixed, all coordinates through %.6g).
"""

from __future__ import annotations

import math

__all__ = ["scatter_fit_svg"]

_W, _H = 640, 420
_ML, _MR, _MT, _MB = 58, 16, 34, 46


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _ticks(lo: float, hi: float, want: int = 6) -> list:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / want
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + step * 1e-9:
        out.append(0.0 if abs(t) < step * 1e-9 else t)
        t += step
    return out


def scatter_fit_svg(lengths, values, alpha: float, c: float,
                    title: str, xlabel: str = "word length",
                    ylabel: str = "log ratio") -> str:
    """Scatter of (length, value) pairs with the line y = alpha*x - c."""
    pts = [(float(x), float(y)) for x, y in zip(lengths, values)
           if math.isfinite(float(y))]
    if not pts:
        raise ValueError("nothing to plot: no finite data points")
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    x0, x1 = min(0.0, min(xs)), max(xs) * 1.05 + 1e-9
    pad = (max(ys) - min(ys)) * 0.05 + 1e-9
    y0, y1 = min(0.0, min(ys)) - pad, max(ys) + pad

    def px(x):
        return _ML + (x - x0) / (x1 - x0) * (_W - _ML - _MR)

    def py(y):
        return _H - _MB - (y - y0) / (y1 - y0) * (_H - _MT - _MB)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2:.6g}" y="20" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
    ]
    axis = 'stroke="black" stroke-width="1"'
    parts.append(f'<line x1="{_fmt(px(x0))}" y1="{_fmt(py(y0))}" '
                 f'x2="{_fmt(px(x1))}" y2="{_fmt(py(y0))}" {axis}/>')
    parts.append(f'<line x1="{_fmt(px(x0))}" y1="{_fmt(py(y0))}" '
                 f'x2="{_fmt(px(x0))}" y2="{_fmt(py(y1))}" {axis}/>')
    for t in _ticks(x0, x1):
        parts.append(f'<line x1="{_fmt(px(t))}" y1="{_fmt(py(y0))}" '
                     f'x2="{_fmt(px(t))}" y2="{_fmt(py(y0) + 4)}" {axis}/>')
        parts.append(f'<text x="{_fmt(px(t))}" y="{_fmt(py(y0) + 17)}" '
                     f'text-anchor="middle" font-family="sans-serif" '
                     f'font-size="11">{_fmt(t)}</text>')
    for t in _ticks(y0, y1):
        parts.append(f'<line x1="{_fmt(px(x0) - 4)}" y1="{_fmt(py(t))}" '
                     f'x2="{_fmt(px(x0))}" y2="{_fmt(py(t))}" {axis}/>')
        parts.append(f'<text x="{_fmt(px(x0) - 7)}" y="{_fmt(py(t) + 4)}" '
                     f'text-anchor="end" font-family="sans-serif" '
                     f'font-size="11">{_fmt(t)}</text>')
    parts.append(f'<text x="{(_ML + _W - _MR) / 2:.6g}" y="{_H - 8}" '
                 f'text-anchor="middle" font-family="sans-serif" '
                 f'font-size="12">{xlabel}</text>')
    parts.append(f'<text x="14" y="{(_MT + _H - _MB) / 2:.6g}" '
                 f'text-anchor="middle" font-family="sans-serif" '
                 f'font-size="12" transform="rotate(-90 14 '
                 f'{(_MT + _H - _MB) / 2:.6g})">{ylabel}</text>')

    # fitted line clipped to the x-range, drawn under the points
    ya, yb = alpha * x0 - c, alpha * x1 - c
    parts.append(f'<line x1="{_fmt(px(x0))}" y1="{_fmt(py(ya))}" '
                 f'x2="{_fmt(px(x1))}" y2="{_fmt(py(yb))}" '
                 f'stroke="#c62828" stroke-width="1.5"/>')
    for x, y in pts:
        parts.append(f'<circle cx="{_fmt(px(x))}" cy="{_fmt(py(y))}" r="2.2" '
                     f'fill="#1565c0" fill-opacity="0.55"/>')
    parts.append(f'<text x="{_W - _MR}" y="{_MT}" text-anchor="end" '
                 f'font-family="sans-serif" font-size="11" fill="#c62828">'
                 f'y = {_fmt(alpha)} x - {_fmt(c)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
