"""CSV and standalone SVG renderings of rate regions and channel matrices."""

from __future__ import annotations

import csv
import io
from xml.sax.saxutils import escape

import numpy as np
from scipy.spatial import ConvexHull

from .region import TOL, RateRegion

PANEL = 300
MARGIN = 40


def region_csv(region: RateRegion) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"r{i + 1}" for i in range(region.dimension)] + ["provenance"])
    for v, tag in zip(region.vertices, region.provenance):
        w.writerow([f"{x:.12g}" for x in v] + [tag])
    return buf.getvalue()


def channel_matrix_csv(matrix: np.ndarray) -> str:
    """One row per frame (T1 least significant); columns are perceived levels."""
    k = int(matrix.shape[0]).bit_length() - 1
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["frame"] + [f"level{l}" for l in range(matrix.shape[1])])
    for p, row in enumerate(matrix):
        bits = "".join(str((p >> j) & 1) for j in range(k))
        w.writerow([bits or "-"] + [int(v) for v in row])
    return buf.getvalue()


def _outline(points: np.ndarray) -> np.ndarray:
    """Counter-clockwise boundary of 2-D points (degenerate sets returned sorted)."""
    pts = np.unique(np.round(points / TOL) * TOL, axis=0)
    if len(pts) < 3 or np.linalg.matrix_rank(pts - pts[0], tol=TOL) < 2:
        return pts[np.lexsort((pts[:, 1], pts[:, 0]))]
    return pts[ConvexHull(pts).vertices]


def _panel(points: np.ndarray, labels: tuple[str, str], x0: float, scale: float) -> list[str]:
    ox, oy = x0 + MARGIN, MARGIN + PANEL
    poly = _outline(points)
    coords = " ".join(f"{ox + px * scale:.2f},{oy - py * scale:.2f}" for px, py in poly)
    top = PANEL
    out = [
        f'<line x1="{ox}" y1="{oy}" x2="{ox + top}" y2="{oy}" stroke="black"/>',
        f'<line x1="{ox}" y1="{oy}" x2="{ox}" y2="{oy - top}" stroke="black"/>',
        f'<text x="{ox + top}" y="{oy + 20}" text-anchor="end">{escape(labels[0])}</text>',
        f'<text x="{ox - 8}" y="{oy - top}" text-anchor="end">{escape(labels[1])}</text>',
        f'<polygon points="{coords}" fill="#9ecae1" fill-opacity="0.6" stroke="#08519c"/>',
    ]
    for px, py in poly:
        out.append(f'<circle cx="{ox + px * scale:.2f}" cy="{oy - py * scale:.2f}" r="3" fill="#08519c"/>')
    return out


def region_svg(region: RateRegion) -> str:
    """Polygon for two receivers; three axis-pair projections for three."""
    m = region.dimension
    if m == 2:
        panels = [(0, 1)]
    elif m == 3:
        panels = [(0, 1), (0, 2), (1, 2)]
    else:
        raise ValueError(f"SVG export supports 2 or 3 receivers, got {m}")
    v = np.asarray(region.vertices, dtype=float)
    span = max(float(v.max()), 1.0)
    scale = (PANEL - 10) / span
    width = len(panels) * (PANEL + 2 * MARGIN)
    body = []
    for n, (a, b) in enumerate(panels):
        body += _panel(v[:, [a, b]], (f"R{a + 1}", f"R{b + 1}"), n * (PANEL + 2 * MARGIN), scale)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{PANEL + 2 * MARGIN}"'
        ' font-family="sans-serif" font-size="12">\n' + "\n".join(body) + "\n</svg>\n"
    )
