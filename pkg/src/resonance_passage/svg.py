"""Minimal SVG scatter + fitted line, written by hand (no plotting library)."""
from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 640, 480
MARGIN = 64


def _ticks(lo, hi, n=5):
    return np.linspace(lo, hi, n)


def loglog_plot(path, ln_x, ln_y, slope, intercept, title="", xlabel="ln ε", ylabel="ln E"):
    ln_x = np.asarray(ln_x, dtype=float)
    ln_y = np.asarray(ln_y, dtype=float)
    x0, x1 = ln_x.min(), ln_x.max()
    fit_y = slope * np.array([x0, x1]) + intercept
    y0 = min(ln_y.min(), fit_y.min())
    y1 = max(ln_y.max(), fit_y.max())
    padx = 0.05 * (x1 - x0 or 1.0)
    pady = 0.05 * (y1 - y0 or 1.0)
    x0, x1, y0, y1 = x0 - padx, x1 + padx, y0 - pady, y1 + pady

    def sx(x):
        return MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2 * MARGIN)

    def sy(y):
        return HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2 * MARGIN)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" '
        f'y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        parts.append(f'<text x="{sx(t):.1f}" y="{HEIGHT - MARGIN + 18}" font-size="11" '
                     f'text-anchor="middle">{t:.2f}</text>')
    for t in _ticks(y0, y1):
        parts.append(f'<text x="{MARGIN - 6}" y="{sy(t) + 4:.1f}" font-size="11" '
                     f'text-anchor="end">{t:.2f}</text>')
    xa, xb = ln_x.min(), ln_x.max()
    parts.append(f'<line x1="{sx(xa):.2f}" y1="{sy(slope * xa + intercept):.2f}" '
                 f'x2="{sx(xb):.2f}" y2="{sy(slope * xb + intercept):.2f}" '
                 'stroke="steelblue" stroke-width="2"/>')
    for x, y in zip(ln_x, ln_y):
        parts.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="4" fill="firebrick"/>')
    parts += [
        f'<text x="{WIDTH / 2}" y="{HEIGHT - 16}" font-size="14" text-anchor="middle">'
        f'{escape(xlabel)}</text>',
        f'<text x="18" y="{HEIGHT / 2}" font-size="14" text-anchor="middle" '
        f'transform="rotate(-90 18 {HEIGHT / 2})">{escape(ylabel)}</text>',
        f'<text x="{WIDTH / 2}" y="28" font-size="15" text-anchor="middle">{escape(title)}</text>',
        "</svg>",
    ]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
