"""Minimal static SVG line chart for orbit traces.

Fixed 960x540 viewBox, linear n-axis, linear or log population axis, one
polyline for the orbit and exactly one horizontal marker at the equilibrium.
"""

from __future__ import annotations

import math

from .simulate import OrbitTrace

WIDTH, HEIGHT = 960, 540
MARGIN = 50


def orbit_svg(trace: OrbitTrace, x_bar: float, log_y: bool = False) -> str:
    values = trace.values()
    ns = [i - trace.m for i in range(len(values))]

    def ty(v: float) -> float:
        return math.log(v) if log_y else v

    ys = [ty(v) for v in values]
    y_lo = min(ys + [ty(x_bar)])
    y_hi = max(ys + [ty(x_bar)])
    if y_hi - y_lo < 1e-12:
        y_lo -= 0.5
        y_hi += 0.5
    n_lo, n_hi = ns[0], ns[-1]

    def px(n: float) -> float:
        return MARGIN + (n - n_lo) / (n_hi - n_lo) * (WIDTH - 2 * MARGIN)

    def py(y: float) -> float:
        return HEIGHT - MARGIN - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - 2 * MARGIN)

    points = " ".join(f"{px(n):.2f},{py(y):.2f}" for n, y in zip(ns, ys))
    eq_y = py(ty(x_bar))
    axis_label = "ln A" if log_y else "A"
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}">\n'
        f'  <rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>\n'
        f'  <line id="equilibrium" x1="{MARGIN}" y1="{eq_y:.2f}" x2="{WIDTH - MARGIN}" y2="{eq_y:.2f}"'
        f' stroke="#c33" stroke-dasharray="6 4"/>\n'
        f'  <polyline points="{points}" fill="none" stroke="#235" stroke-width="1.2"/>\n'
        f'  <text x="{WIDTH // 2}" y="{HEIGHT - 12}" text-anchor="middle" font-size="14">n</text>\n'
        f'  <text x="14" y="{HEIGHT // 2}" font-size="14">{axis_label}</text>\n'
        f"</svg>\n"
    )
