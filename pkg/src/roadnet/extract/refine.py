"""Move raw corner detections onto road centerlines and junction centers.

Shi-Tomasi peaks sit on stroke boundaries: the concave corners of a junction,
the rim of a road end, the inside of a bend. Segment validation rasterizes a
stroke about as wide as the road, so an endpoint that is off the centerline
by one or two pixels already turns a true segment into a net error increase.
Refinement runs in three steps:

1. climb the Gaussian-smoothed mask to the nearest ridge point (junction
   centers are local maxima of the smoothed mask);
2. read where roads cross two concentric rings around the point, fit one
   centerline per road arm and move to the least-squares intersection of the
   arms (for a single arm, to the road tip pulled back by the half-width);
3. re-apply min-distance suppression, since corners of one junction can
   converge to the same place.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ..network import PlanarPoint
from .mask import BinaryMask


ANCHOR_WEIGHT = 0.05


@dataclass(frozen=True)
class RefineParams:
    enabled: bool = True
    sigma: float = 1.5
    climb_steps: int = 4
    inner_ring: float = 6.0
    outer_ring: float = 11.0
    max_move: float = 7.0
    # largest angle (radians) between an arm's inner and outer ring crossings
    arm_tolerance: float = 0.6

    def __post_init__(self) -> None:
        if self.sigma <= 0 or self.climb_steps < 0:
            raise ValueError("sigma must be > 0 and climb_steps >= 0")
        if not 0 < self.inner_ring < self.outer_ring:
            raise ValueError("rings must satisfy 0 < inner_ring < outer_ring")
        if self.max_move <= 0 or self.arm_tolerance <= 0:
            raise ValueError("max_move and arm_tolerance must be > 0")


def ridge_climb(surface: np.ndarray, x: int, y: int, steps: int) -> tuple[int, int]:
    """Steepest strict ascent over the 8-neighbourhood, at most ``steps`` moves."""
    h, w = surface.shape
    for _ in range(steps):
        best, bx, by = surface[y, x], x, y
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                nx, ny = x + dx, y + dy
                if 0 <= nx < w and 0 <= ny < h and surface[ny, nx] > best + 1e-12:
                    best, bx, by = surface[ny, nx], nx, ny
        if (bx, by) == (x, y):
            break
        x, y = bx, by
    return x, y


def ring_arms(data: np.ndarray, cx: float, cy: float, r: float) -> list[float]:
    """Mean angle of every run of road met on a circle of radius ``r``.

    The mask is sampled bilinearly; a sample counts as road above 0.5 and
    contributes to its run's mean angle with its interpolated value.
    """
    n = max(16, int(math.ceil(4 * math.pi * r)))
    theta = 2 * math.pi * np.arange(n) / n
    xs = cx + r * np.cos(theta)
    ys = cy + r * np.sin(theta)
    val = ndimage.map_coordinates(data.astype(np.float64), [ys, xs], order=1, mode="constant")
    on = val > 0.5
    if on.all() or not on.any():
        return []
    # rotate so the circle starts on background; runs then never wrap
    start = int(np.argmin(on))
    on = np.roll(on, -start)
    theta = np.roll(theta, -start)
    val = np.roll(val, -start)
    arms = []
    k = 0
    while k < n:
        if not on[k]:
            k += 1
            continue
        j = k
        while j < n and on[j]:
            j += 1
        # include the partial samples on either side of the run
        lo, hi = max(k - 1, 0), min(j + 1, n)
        w, t = val[lo:hi], theta[lo:hi]
        arms.append(math.atan2(float((w * np.sin(t)).sum()), float((w * np.cos(t)).sum())))
        k = j
    return arms


def _angle_gap(a: float, b: float) -> float:
    return abs(math.remainder(a - b, 2 * math.pi))


def fit_arms(data: np.ndarray, half_width: np.ndarray, p: PlanarPoint, rp: RefineParams) -> PlanarPoint:
    inner = ring_arms(data, p.x, p.y, rp.inner_ring)
    outer = ring_arms(data, p.x, p.y, rp.outer_ring)
    if not inner or not outer:
        return p
    lines = []
    for a in inner:
        b = min(outer, key=lambda t: _angle_gap(t, a))
        if _angle_gap(a, b) > rp.arm_tolerance:
            continue
        q1 = np.array([p.x + rp.inner_ring * math.cos(a), p.y + rp.inner_ring * math.sin(a)])
        q2 = np.array([p.x + rp.outer_ring * math.cos(b), p.y + rp.outer_ring * math.sin(b)])
        d = q2 - q1
        lines.append((q1, d / math.hypot(d[0], d[1])))
    if not lines:
        return p

    p0 = np.array([p.x, p.y])
    a_mat = np.zeros((2, 2))
    rhs = np.zeros(2)
    for q, u in lines:
        m = np.eye(2) - np.outer(u, u)
        a_mat += m
        rhs += m @ q
    # pull toward p0: negligible across crossing arms, but it pins the
    # along-road position when the arms are (nearly) parallel
    x = np.linalg.solve(a_mat + ANCHOR_WEIGHT * np.eye(2), rhs + ANCHOR_WEIGHT * p0)

    if len(lines) == 1:
        # road end: walk outward along the arm to the last road pixel
        u = lines[0][1]
        h, w = data.shape
        pos = x.copy()
        tip = x.copy()
        for _ in range(int(4 * rp.outer_ring)):
            pos = pos - 0.5 * u
            xi, yi = int(round(pos[0])), int(round(pos[1]))
            if not (0 <= xi < w and 0 <= yi < h) or data[yi, xi] == 0:
                break
            tip = pos.copy()
        xi, yi = int(round(x[0])), int(round(x[1]))
        hw = max(float(half_width[yi, xi]) - 1.0, 0.5) if 0 <= xi < w and 0 <= yi < h else 1.0
        x = tip + hw * u

    if math.hypot(x[0] - p.x, x[1] - p.y) > rp.max_move:
        return p
    return PlanarPoint(float(x[0]), float(x[1]))


def suppress(points: list[PlanarPoint], min_distance: float) -> list[PlanarPoint]:
    """Drop points closer than ``min_distance`` to an earlier kept point."""
    kept: list[PlanarPoint] = []
    for p in points:
        if all(math.hypot(p.x - k.x, p.y - k.y) >= min_distance for k in kept):
            kept.append(p)
    return kept


def refine_corners(mask: BinaryMask, corners: list[PlanarPoint], rp: RefineParams, min_distance: float) -> list[PlanarPoint]:
    """Refined corners, in the input order (strongest response first)."""
    if not rp.enabled or not corners:
        return list(corners)
    data = mask.data
    smooth = ndimage.gaussian_filter(data.astype(np.float64), rp.sigma, mode="constant")
    # distance to the nearest background pixel, treating outside as background
    half_width = ndimage.distance_transform_edt(np.pad(data, 1))[1:-1, 1:-1]
    out = []
    for p in corners:
        x, y = ridge_climb(smooth, int(round(p.x)), int(round(p.y)), rp.climb_steps)
        out.append(fit_arms(data, half_width, PlanarPoint(float(x), float(y)), rp))
    return suppress(out, min_distance)
