"""Static SVG emission for factor planes and dendrograms.

Hand-rolled SVG strings: no plotting dependency, and byte-identical
output for identical inputs, which the reproducibility contract needs.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .ca import FactorModel
from .chrono import Dendrogram
from .errors import RankTooLow

_W, _H = 800, 600
_MARGIN = 60


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _svg_open(width: int, height: int, comment: str | None) -> list[str]:
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    ]
    if comment:
        parts.append(f"<!-- {escape(comment)} -->")
    parts.append(f'<rect width="{width}" height="{height}" fill="white"/>')
    return parts


def _scaler(lo: float, hi: float, out_lo: float, out_hi: float):
    span = hi - lo
    if span <= 0:
        span = 1.0
    def scale(v):
        return out_lo + (v - lo) / span * (out_hi - out_lo)
    return scale


def plot_factor_plane(model: FactorModel, highlight=(), comment: str | None = None,
                      term_label_min_cos2: float | None = None) -> str:
    """Axes 1-2 scatter: labeled segment points, terms as unlabeled dots.

    With ``term_label_min_cos2`` set, terms whose squared correlation
    over the plotted plane reaches the threshold get labels too.
    """
    if model.k < 2:
        raise RankTooLow("need at least 2 axes for a planar plot")
    rows = model.row_coords[:, :2]
    cols = model.col_coords[:, :2]
    allpts = np.vstack([rows, cols])
    pad = 0.05 * max(np.ptp(allpts[:, 0]), np.ptp(allpts[:, 1]), 1e-9)
    x0, x1 = allpts[:, 0].min() - pad, allpts[:, 0].max() + pad
    y0, y1 = allpts[:, 1].min() - pad, allpts[:, 1].max() + pad
    sx = _scaler(x0, x1, _MARGIN, _W - _MARGIN)
    sy = _scaler(y0, y1, _H - _MARGIN, _MARGIN)

    highlight = set(highlight)
    parts = _svg_open(_W, _H, comment)
    if x0 < 0 < x1:
        parts.append(f'<line x1="{_fmt(sx(0))}" y1="{_MARGIN}" x2="{_fmt(sx(0))}" '
                     f'y2="{_H - _MARGIN}" stroke="#cccccc"/>')
    if y0 < 0 < y1:
        parts.append(f'<line x1="{_MARGIN}" y1="{_fmt(sy(0))}" x2="{_W - _MARGIN}" '
                     f'y2="{_fmt(sy(0))}" stroke="#cccccc"/>')
    col_plane_cos2 = model.col_cos2[:, :2].sum(axis=1)
    for j in range(cols.shape[0]):
        parts.append(f'<circle cx="{_fmt(sx(cols[j, 0]))}" cy="{_fmt(sy(cols[j, 1]))}" '
                     f'r="1.5" fill="#999999"/>')
        if term_label_min_cos2 is not None and col_plane_cos2[j] >= term_label_min_cos2:
            parts.append(f'<text x="{_fmt(sx(cols[j, 0]) + 3)}" y="{_fmt(sy(cols[j, 1]) - 3)}" '
                         f'font-size="9" font-family="sans-serif" fill="#666666">'
                         f'{escape(str(model.col_labels[j]))}</text>')
    for i in range(rows.shape[0]):
        label = model.row_labels[i]
        x, y = sx(rows[i, 0]), sy(rows[i, 1])
        if label in highlight:
            parts.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="5" fill="#c0392b"/>')
        else:
            parts.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3" fill="#2c5f8a"/>')
        parts.append(f'<text x="{_fmt(x + 5)}" y="{_fmt(y - 5)}" font-size="11" '
                     f'font-family="sans-serif">{escape(str(label))}</text>')
    parts.append(
        f'<text x="{_W // 2}" y="{_H - 15}" font-size="13" font-family="sans-serif" '
        f'text-anchor="middle">Axis 1 ({model.percent_inertia[0]:.1f}% of inertia)</text>'
    )
    parts.append(
        f'<text x="20" y="{_H // 2}" font-size="13" font-family="sans-serif" '
        f'text-anchor="middle" transform="rotate(-90 20 {_H // 2})">'
        f'Axis 2 ({model.percent_inertia[1]:.1f}% of inertia)</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def plot_strip(model: FactorModel, highlight=(), comment: str | None = None) -> str:
    """1-D fallback when only one axis exists: points along a strip."""
    if model.k < 1:
        raise RankTooLow("the model has no axes to plot")
    xs = model.row_coords[:, 0]
    pad = 0.05 * max(float(np.ptp(xs)), 1e-9)
    sx = _scaler(float(xs.min()) - pad, float(xs.max()) + pad, _MARGIN, _W - _MARGIN)
    mid = _H // 2
    highlight = set(highlight)
    parts = _svg_open(_W, _H, comment)
    parts.append(f'<line x1="{_MARGIN}" y1="{mid}" x2="{_W - _MARGIN}" y2="{mid}" '
                 f'stroke="#cccccc"/>')
    for i in range(xs.shape[0]):
        label = model.row_labels[i]
        x = sx(float(xs[i]))
        r, color = (5, "#c0392b") if label in highlight else (3, "#2c5f8a")
        parts.append(f'<circle cx="{_fmt(x)}" cy="{mid}" r="{r}" fill="{color}"/>')
        parts.append(f'<text x="{_fmt(x + 5)}" y="{mid - 8}" font-size="11" '
                     f'font-family="sans-serif">{escape(str(label))}</text>')
    parts.append(
        f'<text x="{_W // 2}" y="{_H - 15}" font-size="13" font-family="sans-serif" '
        f'text-anchor="middle">Axis 1 ({model.percent_inertia[0]:.1f}% of inertia)</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def plot_dendrogram(dendrogram: Dendrogram, labels=None, comment: str | None = None) -> str:
    """Leaves in sequence order along the bottom, merge heights vertical."""
    n = dendrogram.n_leaves
    if labels is None:
        labels = [str(i + 1) for i in range(n)]
    max_h = max((m.height for m in dendrogram.merges), default=1.0) or 1.0
    step = (_W - 2 * _MARGIN) / max(n - 1, 1)
    leaf_x = [_MARGIN + i * step for i in range(n)]
    sy = _scaler(0.0, max_h, _H - _MARGIN, _MARGIN)

    parts = _svg_open(_W, _H, comment)
    for t in range(5):
        h = max_h * t / 4
        y = sy(h)
        parts.append(f'<line x1="{_MARGIN - 4}" y1="{_fmt(y)}" x2="{_MARGIN}" y2="{_fmt(y)}" '
                     f'stroke="#333333"/>')
        parts.append(f'<text x="{_MARGIN - 8}" y="{_fmt(y + 4)}" font-size="10" '
                     f'font-family="sans-serif" text-anchor="end">{h:.3g}</text>')
    for i in range(n):
        parts.append(f'<text x="{_fmt(leaf_x[i])}" y="{_H - _MARGIN + 14}" font-size="9" '
                     f'font-family="sans-serif" text-anchor="middle">'
                     f'{escape(str(labels[i]))}</text>')

    # Per live block: (x position, y of its last merge).
    pos: dict[tuple[int, int], tuple[float, float]] = {
        (i + 1, i + 1): (leaf_x[i], float(_H - _MARGIN)) for i in range(n)
    }
    for m in dendrogram.merges:
        xl, yl = pos.pop(m.left)
        xr, yr = pos.pop(m.right)
        y = sy(m.height)
        parts.append(f'<line x1="{_fmt(xl)}" y1="{_fmt(yl)}" x2="{_fmt(xl)}" y2="{_fmt(y)}" '
                     f'stroke="#2c5f8a"/>')
        parts.append(f'<line x1="{_fmt(xr)}" y1="{_fmt(yr)}" x2="{_fmt(xr)}" y2="{_fmt(y)}" '
                     f'stroke="#2c5f8a"/>')
        parts.append(f'<line x1="{_fmt(xl)}" y1="{_fmt(y)}" x2="{_fmt(xr)}" y2="{_fmt(y)}" '
                     f'stroke="#2c5f8a"/>')
        pos[m.union] = ((xl + xr) / 2.0, y)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
