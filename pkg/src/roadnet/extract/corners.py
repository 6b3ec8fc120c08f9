"""Minimum-eigenvalue (Shi-Tomasi) corner detection on binary masks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ..network import PlanarPoint
from .mask import BinaryMask


@dataclass(frozen=True)
class CornerParams:
    window: int = 5
    quality: float = 0.01
    min_distance: float = 10.0
    max_corners: int = 500

    def __post_init__(self) -> None:
        if self.window < 1 or self.window % 2 == 0:
            raise ValueError(f"window must be a positive odd size, got {self.window}")
        if not 0 < self.quality <= 1:
            raise ValueError(f"quality must be in (0, 1], got {self.quality}")
        if self.min_distance < 0 or self.max_corners < 1:
            raise ValueError("min_distance must be >= 0 and max_corners >= 1")


def structure_tensor(mask: BinaryMask, window: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Window sums of Ix^2, Ix*Iy, Iy^2 from 3x3 Sobel gradients (edge-replicated)."""
    img = mask.data.astype(np.float64)
    ix = ndimage.sobel(img, axis=1, mode="nearest")
    iy = ndimage.sobel(img, axis=0, mode="nearest")
    box = np.ones((window, window))
    sxx = ndimage.correlate(ix * ix, box, mode="constant")
    sxy = ndimage.correlate(ix * iy, box, mode="constant")
    syy = ndimage.correlate(iy * iy, box, mode="constant")
    return sxx, sxy, syy


def shi_tomasi_response(mask: BinaryMask, window: int = 5) -> np.ndarray:
    """Smaller eigenvalue of the structure tensor at every pixel."""
    sxx, sxy, syy = structure_tensor(mask, window)
    t = sxx + syy
    d = sxx * syy - sxy * sxy
    root = np.sqrt(np.maximum(t * t - 4.0 * d, 0.0))
    # (t - root) / 2 rewritten as 2d / (t + root) to avoid cancellation
    denom = t + root
    r = np.divide(2.0 * d, denom, out=np.zeros_like(t), where=denom > 0)
    return np.maximum(r, 0.0)


def shi_tomasi_corners(mask: BinaryMask, params: CornerParams = CornerParams()) -> list[PlanarPoint]:
    r = shi_tomasi_response(mask, params.window)
    peak = float(r.max())
    if peak <= 0.0:
        return []
    local_max = r == ndimage.maximum_filter(r, size=3, mode="constant")
    ys, xs = np.nonzero(local_max & (r >= params.quality * peak) & (r > 0))
    order = np.lexsort((xs, ys, -r[ys, xs]))

    kept_x: list[int] = []
    kept_y: list[int] = []
    min_d2 = params.min_distance ** 2
    for k in order:
        x, y = int(xs[k]), int(ys[k])
        if kept_x:
            d2 = (np.asarray(kept_x) - x) ** 2 + (np.asarray(kept_y) - y) ** 2
            if d2.min() < min_d2:
                continue
        kept_x.append(x)
        kept_y.append(y)
        if len(kept_x) >= params.max_corners:
            break
    return [PlanarPoint(float(x), float(y)) for x, y in zip(kept_x, kept_y)]
