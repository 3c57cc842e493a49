"""Deterministic SVG output: level-set slices of polynomials and barcode diagrams."""

from __future__ import annotations

import math

import numpy as np
from skimage import measure

from .reach import eval_many

WIDTH = 600
MARGIN = 40
COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]


def _fmt(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def sign_grid(poly, window, grid: int) -> tuple:
    """Values of a bivariate polynomial on a grid x grid lattice over the window."""
    (x0, x1), (y0, y1) = [(float(a), float(b)) for a, b in window]
    xs = np.linspace(x0, x1, grid)
    ys = np.linspace(y0, y1, grid)
    X, Y = np.meshgrid(xs, ys)          # rows follow y
    vals = eval_many(poly, np.stack([X.ravel(), Y.ravel()], axis=1)).reshape(grid, grid)
    return xs, ys, vals


def level_curves(poly, window, grid: int = 200) -> list:
    """Zero-level polylines of a bivariate polynomial by marching squares."""
    if poly.is_zero():
        raise ValueError("cannot draw the zero polynomial")
    if grid < 2:
        raise ValueError("grid must be at least 2")
    xs, ys, vals = sign_grid(poly, window, grid)
    out = []
    for c in measure.find_contours(vals, 0.0):
        # (row, col) fractional indices -> coordinates
        y = np.interp(c[:, 0], np.arange(grid), ys)
        x = np.interp(c[:, 1], np.arange(grid), xs)
        out.append(np.stack([x, y], axis=1))
    return out


def _header(w, h):
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>',
    ]


def curve_slices_svg(layers, window, title: str = "") -> str:
    """``layers`` is a list of (polylines, color) pairs drawn in order."""
    (x0, x1), (y0, y1) = [(float(a), float(b)) for a, b in window]
    inner = WIDTH - 2 * MARGIN
    scale = inner / max(x1 - x0, y1 - y0)
    w = int(round((x1 - x0) * scale)) + 2 * MARGIN
    h = int(round((y1 - y0) * scale)) + 2 * MARGIN

    def px(p):
        return _fmt(MARGIN + (p[0] - x0) * scale), _fmt(h - MARGIN - (p[1] - y0) * scale)

    lines = _header(w, h)
    lines.append(f'<rect x="{MARGIN}" y="{MARGIN}" width="{w - 2 * MARGIN}" '
                 f'height="{h - 2 * MARGIN}" fill="none" stroke="#888"/>')
    if title:
        lines.append(f'<text x="{MARGIN}" y="{MARGIN - 12}" font-family="sans-serif" '
                     f'font-size="14">{_escape(title)}</text>')
    for polylines, color in layers:
        for pl in polylines:
            pts = " ".join(",".join(px(p)) for p in pl)
            lines.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def barcode_svg(barcode, title: str = "") -> str:
    """Horizontal bars per interval, dimensions stacked top to bottom."""
    ivs = sorted(barcode.intervals)
    finite = [x for _, b, d in ivs for x in (b, d) if math.isfinite(x)]
    right = max(finite) * 1.1 if finite and max(finite) > 0 else 1.0
    bar, gap = 6, 18
    dims = sorted({d for d, _, _ in ivs})
    h = 2 * MARGIN + len(ivs) * bar + len(dims) * gap
    w = WIDTH
    inner = w - 2 * MARGIN
    lines = _header(w, h)
    if title:
        lines.append(f'<text x="{MARGIN}" y="{MARGIN - 22}" font-family="sans-serif" '
                     f'font-size="14">{_escape(title)}</text>')
    base = h - MARGIN
    lines.append(f'<line x1="{MARGIN}" y1="{base}" x2="{w - MARGIN}" y2="{base}" stroke="black"/>')
    for t in range(6):
        v = right * t / 5
        x = _fmt(MARGIN + inner * t / 5)
        lines.append(f'<line x1="{x}" y1="{base}" x2="{x}" y2="{base + 4}" stroke="black"/>')
        lines.append(f'<text x="{x}" y="{base + 16}" font-family="sans-serif" font-size="10" '
                     f'text-anchor="middle">{_fmt(v)}</text>')
    y = MARGIN
    for k in dims:
        color = COLORS[k % len(COLORS)]
        lines.append(f'<text x="4" y="{y + 10}" font-family="sans-serif" font-size="11">H{k}</text>')
        y += gap - bar
        for d, b, e in ivs:
            if d != k:
                continue
            xa = MARGIN + inner * b / right
            xb = MARGIN + inner * (min(e, right) / right)
            lines.append(f'<rect x="{_fmt(xa)}" y="{y}" width="{_fmt(max(xb - xa, 0.5))}" '
                         f'height="{bar - 1}" fill="{color}"/>')
            if not math.isfinite(e):
                lines.append(f'<text x="{_fmt(xb + 2)}" y="{y + bar - 1}" font-family="sans-serif" '
                             f'font-size="8">&#8734;</text>')
            y += bar
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
