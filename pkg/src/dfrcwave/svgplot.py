"""Minimal self-contained SVG line plots; no plotting dependency."""
from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 720, 440
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 20, 40, 55
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"]
DASHES = ["", "7 4", "2 3", "7 2 2 2", "1 2"]


def _ticks(lo: float, hi: float, count: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(count - 1, 1)
    mag = 10.0 ** int(f"{raw:e}".split("e")[1])
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if mult * mag >= raw:
            step = mult * mag
            break
    else:
        step = raw
    first = step * round(lo / step)
    if first < lo - 1e-12 * abs(step):
        first += step
    ticks = []
    t = first
    while t <= hi + 1e-9 * abs(step):
        ticks.append(round(t, 12))
        t += step
    return ticks or [lo, hi]


def line_plot(
    path,
    series: list[tuple[list[float], list[float], str]],
    title: str,
    x_label: str,
    y_label: str,
) -> None:
    """Write a static plot; series is a list of (x, y, label) triples."""
    xs = [v for s in series for v in s[0]]
    ys = [v for s in series for v in s[1] if v == v and abs(v) != float("inf")]
    if not xs or not ys:
        raise ValueError("nothing to plot")
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad
    inner_w = WIDTH - MARGIN_L - MARGIN_R
    inner_h = HEIGHT - MARGIN_T - MARGIN_B

    def sx(x):
        return MARGIN_L + inner_w * (x - x_lo) / (x_hi - x_lo)

    def sy(y):
        return MARGIN_T + inner_h * (1.0 - (y - y_lo) / (y_hi - y_lo))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="13">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="16">'
        f"{escape(title)}</text>",
    ]
    for t in _ticks(x_lo, x_hi):
        if x_lo <= t <= x_hi:
            parts.append(
                f'<line x1="{sx(t):.2f}" y1="{MARGIN_T}" x2="{sx(t):.2f}" '
                f'y2="{HEIGHT - MARGIN_B}" stroke="#dddddd"/>'
            )
            parts.append(
                f'<text x="{sx(t):.2f}" y="{HEIGHT - MARGIN_B + 18}" '
                f'text-anchor="middle">{t:g}</text>'
            )
    for t in _ticks(y_lo, y_hi):
        if y_lo <= t <= y_hi:
            parts.append(
                f'<line x1="{MARGIN_L}" y1="{sy(t):.2f}" x2="{WIDTH - MARGIN_R}" '
                f'y2="{sy(t):.2f}" stroke="#dddddd"/>'
            )
            parts.append(
                f'<text x="{MARGIN_L - 8}" y="{sy(t) + 4:.2f}" '
                f'text-anchor="end">{t:g}</text>'
            )
    parts.append(
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{inner_w}" height="{inner_h}" '
        f'fill="none" stroke="#333333"/>'
    )
    for idx, (x_vals, y_vals, label) in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        dash = DASHES[idx % len(DASHES)]
        pts = " ".join(
            f"{sx(x):.2f},{sy(y):.2f}"
            for x, y in zip(x_vals, y_vals)
            if y == y and abs(y) != float("inf")
        )
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="1.8"{dash_attr}/>'
        )
        ly = MARGIN_T + 16 + 18 * idx
        lx = WIDTH - MARGIN_R - 170
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 28}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="1.8"{dash_attr}/>'
        )
        parts.append(f'<text x="{lx + 34}" y="{ly}">{escape(label)}</text>')
    parts.append(
        f'<text x="{MARGIN_L + inner_w / 2:.1f}" y="{HEIGHT - 12}" '
        f'text-anchor="middle">{escape(x_label)}</text>'
    )
    parts.append(
        f'<text x="18" y="{MARGIN_T + inner_h / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {MARGIN_T + inner_h / 2:.1f})">{escape(y_label)}</text>'
    )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
