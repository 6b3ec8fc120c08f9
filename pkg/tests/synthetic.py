"""Random planar road graphs, a round-brush renderer and a matching scorer.

The renderer marks every pixel whose center lies within ``radius`` of a
segment, which is independent of the library's square-dilated Bresenham
strokes.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.spatial import Delaunay

CANVAS = 512
STROKE_RADIUS = 1.5  # 3 px wide strokes
MIN_SEPARATION = 30.0
MARGIN = 40
CLEARANCE = 12.0  # between a segment and any node or segment it does not touch
MIN_JUNCTION_ANGLE = 35.0
MAX_BEND_ANGLE = 120.0  # interior angle at degree-2 nodes


def _point_seg(p, a, b) -> float:
    dx, dy = b[0] - a[0], b[1] - a[1]
    t = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / (dx * dx + dy * dy)
    t = min(1.0, max(0.0, t))
    return math.hypot(a[0] + t * dx - p[0], a[1] + t * dy - p[1])


def _seg_seg(a, b, c, d) -> float:
    def cross(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    if cross(a, b, c) * cross(a, b, d) < 0 and cross(c, d, a) * cross(c, d, b) < 0:
        return 0.0
    return min(_point_seg(a, c, d), _point_seg(b, c, d), _point_seg(c, a, b), _point_seg(d, a, b))


def _angle_at(center, p, q) -> float:
    a = math.atan2(p[1] - center[1], p[0] - center[0]) - math.atan2(q[1] - center[1], q[0] - center[0])
    a = abs(math.degrees(a)) % 360
    return min(a, 360 - a)


def random_network(rng: np.random.Generator, n_min: int = 5, n_max: int = 12):
    """Connected graph with well-separated nodes; returns (points, edges)."""
    while True:
        n = int(rng.integers(n_min, n_max + 1))
        pts: list[tuple[int, int]] = []
        for _ in range(5000):
            if len(pts) == n:
                break
            p = tuple(int(v) for v in rng.integers(MARGIN, CANVAS - MARGIN, 2))
            if all(math.dist(p, q) >= MIN_SEPARATION for q in pts):
                pts.append(p)
        if len(pts) < n:
            continue

        cand = set()
        for s in Delaunay(np.array(pts, dtype=float)).simplices:
            for k in range(3):
                a, b = sorted((int(s[k]), int(s[(k + 1) % 3])))
                cand.add((a, b))
        cand = sorted(cand, key=lambda e: (math.dist(pts[e[0]], pts[e[1]]), e))
        edges: list[tuple[int, int]] = []

        def fits(e) -> bool:
            a, b = e
            for k, p in enumerate(pts):
                if k not in e and _point_seg(p, pts[a], pts[b]) < CLEARANCE:
                    return False
            for f in edges:
                shared = set(e) & set(f)
                if shared:
                    c = shared.pop()
                    u = e[0] if e[1] == c else e[1]
                    v = f[0] if f[1] == c else f[1]
                    if _angle_at(pts[c], pts[u], pts[v]) < MIN_JUNCTION_ANGLE:
                        return False
                elif _seg_seg(pts[a], pts[b], pts[f[0]], pts[f[1]]) < CLEARANCE:
                    return False
            return True

        parent = list(range(n))

        def root(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in cand:  # spanning tree first
            if root(e[0]) != root(e[1]) and fits(e):
                edges.append(e)
                parent[root(e[0])] = root(e[1])
        for e in cand:  # then some loops
            if e not in edges and rng.random() < 0.5 and fits(e):
                edges.append(e)
        if len({root(i) for i in range(n)}) != 1:
            continue

        nbrs: dict[int, list[int]] = {i: [] for i in range(n)}
        for a, b in edges:
            nbrs[a].append(b)
            nbrs[b].append(a)
        if any(len(v) == 2 and _angle_at(pts[i], pts[v[0]], pts[v[1]]) > MAX_BEND_ANGLE
               for i, v in nbrs.items()):
            continue
        return pts, edges


def render(pts, edges, size: int = CANVAS, radius: float = STROKE_RADIUS) -> np.ndarray:
    out = np.zeros((size, size), dtype=bool)
    pad = int(math.ceil(radius)) + 1
    for a, b in edges:
        (ax, ay), (bx, by) = pts[a], pts[b]
        x0, x1 = max(0, min(ax, bx) - pad), min(size, max(ax, bx) + pad + 1)
        y0, y1 = max(0, min(ay, by) - pad), min(size, max(ay, by) + pad + 1)
        yy, xx = np.mgrid[y0:y1, x0:x1].astype(float)
        dx, dy = bx - ax, by - ay
        t = np.clip(((xx - ax) * dx + (yy - ay) * dy) / (dx * dx + dy * dy), 0.0, 1.0)
        out[y0:y1, x0:x1] |= np.hypot(ax + t * dx - xx, ay + t * dy - yy) <= radius
    return out.astype(np.uint8)


def score(truth_pts, truth_edges, got_pts, got_edges, tol: float = 5.0) -> tuple[float, float]:
    """(node recall, edge F1) after greedy nearest matching within ``tol`` px."""
    pairs = sorted(
        (math.dist(p, q), i, j)
        for i, p in enumerate(truth_pts)
        for j, q in enumerate(got_pts)
        if math.dist(p, q) <= tol
    )
    match: dict[int, int] = {}
    used = set()
    for _, i, j in pairs:
        if i not in match and j not in used:
            match[i] = j
            used.add(j)
    back = {j: i for i, j in match.items()}
    recall = len(match) / len(truth_pts)
    truth = {tuple(sorted(e)) for e in truth_edges}
    mapped = {tuple(sorted((back[a], back[b]))) for a, b in got_edges if a in back and b in back}
    tp = len(truth & mapped)
    if tp == 0:
        return recall, 0.0
    precision = tp / len(got_edges)
    rec = tp / len(truth)
    return recall, 2 * precision * rec / (precision + rec)
