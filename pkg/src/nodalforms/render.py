"""Static SVG renderings of eigenfunctions and nodal domains.

SVG over raster: diffable text output, no imaging dependency. Graphs get a
deterministic circular layout with vertices colored by sign and translucent
hulls around each nodal domain; grids get a diverging heatmap with the
sign-change contour drawn on cell boundaries. All coordinates use fixed
decimal formatting so identical inputs render to identical bytes.
"""

from __future__ import annotations

import math

import numpy as np

from .elliptic import GridSpec
from .forms import WeightedGraph
from .nodal import NodalDecomposition

POSITIVE_COLOR = "#d73027"
NEGATIVE_COLOR = "#4575b4"
ZERO_COLOR = "#bdbdbd"
HULL_COLORS = ("#fdae61", "#abd9e9", "#fee090", "#74add1",
               "#f46d43", "#e0f3f8", "#a50026", "#313695")


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _convex_hull(points):
    """Andrew's monotone chain; returns hull vertices counterclockwise."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _circle_offsets(x, y, radius, samples=8):
    return [(x + radius * math.cos(2 * math.pi * t / samples),
             y + radius * math.sin(2 * math.pi * t / samples))
            for t in range(samples)]


def render_graph_svg(g: WeightedGraph, f, nd: NodalDecomposition,
                     size: int = 480) -> str:
    """Eigenfunction on a circular vertex layout with domain hulls."""
    f = np.asarray(f, dtype=float)
    n = g.n_vertices
    cx = cy = size / 2.0
    ring = size * 0.38
    pos = [(cx + ring * math.cos(2 * math.pi * i / n - math.pi / 2),
            cy + ring * math.sin(2 * math.pi * i / n - math.pi / 2))
           for i in range(n)]
    vertex_r = max(6.0, min(14.0, 80.0 / math.sqrt(n)))

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
             f'height="{size}" viewBox="0 0 {size} {size}">',
             f'<rect width="{size}" height="{size}" fill="white"/>']

    for hull_index, domain in enumerate(nd.domains):
        color = HULL_COLORS[hull_index % len(HULL_COLORS)]
        offsets = []
        for i in domain.indices():
            offsets.extend(_circle_offsets(*pos[int(i)], vertex_r * 1.9))
        hull = _convex_hull(offsets)
        path = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in hull)
        parts.append(f'<polygon points="{path}" fill="{color}" '
                     f'fill-opacity="0.45" stroke="{color}" stroke-width="1"/>')

    if g.n_edges:
        wmax = float(np.max(g.edge_w))
        for u, v, w in zip(g.edge_u, g.edge_v, g.edge_w):
            width = 0.8 + 2.2 * math.sqrt(w / wmax)
            parts.append(
                f'<line x1="{_fmt(pos[u][0])}" y1="{_fmt(pos[u][1])}" '
                f'x2="{_fmt(pos[v][0])}" y2="{_fmt(pos[v][1])}" '
                f'stroke="#555555" stroke-width="{_fmt(width)}"/>')

    pattern = nd.sign_pattern
    for i in range(n):
        if pattern.positive_set.bits[i]:
            fill = POSITIVE_COLOR
        elif pattern.negative_set.bits[i]:
            fill = NEGATIVE_COLOR
        else:
            fill = ZERO_COLOR
        x, y = pos[i]
        parts.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" '
                     f'r="{_fmt(vertex_r)}" fill="{fill}" stroke="black" '
                     f'stroke-width="1"/>')
        parts.append(f'<text x="{_fmt(x)}" y="{_fmt(y + 3)}" '
                     f'text-anchor="middle" font-size="9" '
                     f'font-family="sans-serif">{g.labels[i]}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _diverging_color(t: float) -> str:
    """t in [-1, 1] -> blue through white to red."""
    t = max(-1.0, min(1.0, t))
    target = (215, 48, 39) if t >= 0 else (69, 117, 180)
    s = abs(t)
    r, g, b = (int(round(255 * (1 - s) + ch * s)) for ch in target)
    return f"#{r:02x}{g:02x}{b:02x}"


def render_grid_svg(spec: GridSpec, f, size: int = 480) -> str:
    """Heatmap of a function on the masked cells with the sign contour.

    Black segments are drawn on shared boundaries of cells with opposite
    signs: the discrete zero-level contour.
    """
    f = np.asarray(f, dtype=float)
    if spec.dims == 1:
        nx, ny = spec.shape[0], 1
        mask = spec.mask.reshape(nx, 1)
    else:
        nx, ny = spec.shape
        mask = spec.mask
    values = np.zeros((nx, ny))
    k = 0
    for i in range(nx):
        for j in range(ny):
            if mask[i, j]:
                values[i, j] = f[k]
                k += 1
    scale = float(np.max(np.abs(f))) or 1.0

    cell = max(4.0, min(40.0, size / max(nx, ny)))
    width, height = cell * ny, cell * nx
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
             f'height="{_fmt(height)}" '
             f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">']
    for i in range(nx):
        for j in range(ny):
            if not mask[i, j]:
                continue
            color = _diverging_color(values[i, j] / scale)
            parts.append(f'<rect x="{_fmt(j * cell)}" y="{_fmt(i * cell)}" '
                         f'width="{_fmt(cell)}" height="{_fmt(cell)}" '
                         f'fill="{color}"/>')
    for i in range(nx):
        for j in range(ny):
            if not mask[i, j]:
                continue
            for di, dj in ((1, 0), (0, 1)):
                ii, jj = i + di, j + dj
                if ii < nx and jj < ny and mask[ii, jj]:
                    if values[i, j] * values[ii, jj] < 0.0:
                        if di == 1:
                            x1, y1 = j * cell, ii * cell
                            x2, y2 = (j + 1) * cell, ii * cell
                        else:
                            x1, y1 = jj * cell, i * cell
                            x2, y2 = jj * cell, (i + 1) * cell
                        parts.append(
                            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" '
                            f'x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
                            f'stroke="black" stroke-width="2"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
