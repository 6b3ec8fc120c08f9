"""Integer line rasterization and thick strokes."""

from __future__ import annotations

import numpy as np


def bresenham(x0: int, y0: int, x1: int, y1: int) -> tuple[np.ndarray, np.ndarray]:
    """Pixels of the segment as (xs, ys), identical for either endpoint order.

    Closed form of the integer error-accumulator algorithm: along the major
    axis step i, the minor offset is floor((2*i*minor + major) / (2*major)).
    """
    if (x1, y1) < (x0, y0):
        x0, y0, x1, y1 = x1, y1, x0, y0
    dx, dy = x1 - x0, y1 - y0
    adx, ady = abs(dx), abs(dy)
    sx = 1 if dx >= 0 else -1
    sy = 1 if dy >= 0 else -1
    n = max(adx, ady)
    i = np.arange(n + 1, dtype=np.int64)
    if n == 0:
        return np.array([x0]), np.array([y0])
    if adx >= ady:
        xs = x0 + sx * i
        ys = y0 + sy * ((2 * i * ady + adx) // (2 * adx))
    else:
        ys = y0 + sy * i
        xs = x0 + sx * ((2 * i * adx + ady) // (2 * ady))
    return xs, ys


def stroke_indices(p, q, thickness: int, shape: tuple[int, int]) -> np.ndarray:
    """Sorted flat indices of the segment dilated by a (2t+1)^2 square, clipped to ``shape``."""
    h, w = shape
    xs, ys = bresenham(int(round(p[0])), int(round(p[1])), int(round(q[0])), int(round(q[1])))
    if thickness > 0:
        off = np.arange(-thickness, thickness + 1)
        ox, oy = np.meshgrid(off, off)
        xs = (xs[:, None] + ox.ravel()[None, :]).ravel()
        ys = (ys[:, None] + oy.ravel()[None, :]).ravel()
    keep = (xs >= 0) & (xs < w) & (ys >= 0) & (ys < h)
    return np.unique(ys[keep] * w + xs[keep])


def draw_segment(canvas: np.ndarray, p, q, thickness: int) -> None:
    np.put(canvas, stroke_indices(p, q, thickness, canvas.shape), 1)
