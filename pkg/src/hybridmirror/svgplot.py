"""Minimal deterministic SVG line plots.

Hand-emitted so that figure output is a pure function of the data: no
plotting library, no fonts measured, no timestamps.  Good enough for the
1-D curves this package produces.
"""

from __future__ import annotations

from collections.abc import Sequence

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

_W, _H = 720.0, 440.0
_ML, _MR, _MT, _MB = 64.0, 16.0, 36.0, 48.0


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def _fmt(v: float) -> str:
    return f"{v:.4g}"


def line_plot(
    path: str,
    x: Sequence[float],
    series: Sequence[tuple[str, Sequence[float]]],
    title: str,
    xlabel: str,
    ylabel: str,
) -> None:
    """Write an SVG with one polyline per (label, values) pair."""
    xs = list(map(float, x))
    xmin, xmax = min(xs), max(xs)
    ymin = min(min(map(float, ys)) for _, ys in series)
    ymax = max(max(map(float, ys)) for _, ys in series)
    if xmax == xmin:
        xmax = xmin + 1.0
    if ymax == ymin:
        ymin, ymax = ymin - 0.5, ymax + 0.5
    pad = 0.05 * (ymax - ymin)
    ymin -= pad
    ymax += pad

    pw = _W - _ML - _MR
    ph = _H - _MT - _MB

    def px(v: float) -> float:
        return _ML + (v - xmin) / (xmax - xmin) * pw

    def py(v: float) -> float:
        return _MT + (ymax - v) / (ymax - ymin) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W:.0f}" '
        f'height="{_H:.0f}" viewBox="0 0 {_W:.0f} {_H:.0f}">',
        f'<rect width="{_W:.0f}" height="{_H:.0f}" fill="white"/>',
        f'<text x="{_W / 2:.1f}" y="20" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
    ]
    # axes box
    out.append(
        f'<rect x="{_ML:.1f}" y="{_MT:.1f}" width="{pw:.1f}" height="{ph:.1f}" '
        f'fill="none" stroke="#333" stroke-width="1"/>'
    )
    for tx in _ticks(xmin, xmax):
        out.append(
            f'<line x1="{px(tx):.2f}" y1="{_MT + ph:.1f}" x2="{px(tx):.2f}" '
            f'y2="{_MT + ph + 5:.1f}" stroke="#333"/>'
        )
        out.append(
            f'<text x="{px(tx):.2f}" y="{_MT + ph + 18:.1f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{_fmt(tx)}</text>'
        )
    for ty in _ticks(ymin, ymax):
        out.append(
            f'<line x1="{_ML - 5:.1f}" y1="{py(ty):.2f}" x2="{_ML:.1f}" '
            f'y2="{py(ty):.2f}" stroke="#333"/>'
        )
        out.append(
            f'<text x="{_ML - 8:.1f}" y="{py(ty) + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{_fmt(ty)}</text>'
        )
    out.append(
        f'<text x="{_ML + pw / 2:.1f}" y="{_H - 10:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{xlabel}</text>'
    )
    out.append(
        f'<text x="16" y="{_MT + ph / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {_MT + ph / 2:.1f})">{ylabel}</text>'
    )
    for i, (label, ys) in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(
            f"{px(xv):.2f},{py(float(yv)):.2f}" for xv, yv in zip(xs, ys)
        )
        out.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="1.5"/>'
        )
        ly = _MT + 16 + 16 * i
        out.append(
            f'<line x1="{_ML + pw - 120:.1f}" y1="{ly:.1f}" '
            f'x2="{_ML + pw - 96:.1f}" y2="{ly:.1f}" stroke="{color}" '
            f'stroke-width="2"/>'
        )
        out.append(
            f'<text x="{_ML + pw - 90:.1f}" y="{ly + 4:.1f}" '
            f'font-family="sans-serif" font-size="11">{label}</text>'
        )
    out.append("</svg>")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")
