"""Point-to-point line validation against the mask, degree classes and pruning."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import OutOfBounds
from ..network import PlanarPoint
from .mask import BinaryMask
from .raster import stroke_indices


@dataclass(frozen=True)
class ConnectParams:
    thickness: int = 1
    collinearity_eps: float = 2.0
    max_pair_distance: float | None = None  # None means the image diagonal
    # accepted strokes are drawn onto the canvas this many pixels wider than
    # the tested stroke, so rasterization slivers left along a road cannot be
    # collected later by long shortcuts
    canvas_pad: int = 1

    def __post_init__(self) -> None:
        if self.thickness < 0 or self.canvas_pad < 0:
            raise ValueError("thickness and canvas_pad must be >= 0")
        if self.collinearity_eps <= 0:
            raise ValueError("collinearity_eps must be > 0")


@dataclass(frozen=True)
class AdjacencyGraph:
    points: tuple[PlanarPoint, ...]
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(self.points))
        norm = set()
        for a, b in self.edges:
            if a == b:
                raise ValueError(f"self edge at {a}")
            if not (0 <= a < len(self.points) and 0 <= b < len(self.points)):
                raise ValueError(f"edge ({a}, {b}) out of range")
            norm.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(norm))

    def degrees(self) -> list[int]:
        deg = [0] * len(self.points)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def neighbors(self) -> list[set[int]]:
        nb: list[set[int]] = [set() for _ in self.points]
        for a, b in self.edges:
            nb[a].add(b)
            nb[b].add(a)
        return nb


class Kind(Enum):
    IMPORTANT = "Important"
    NON_IMPORTANT = "NonImportant"


@dataclass(frozen=True)
class PointClass:
    point: PlanarPoint
    degree: int
    kind: Kind


def _check_inside(mask: BinaryMask, p: PlanarPoint) -> None:
    x, y = round(p.x), round(p.y)
    if not (0 <= x < mask.width and 0 <= y < mask.height):
        raise OutOfBounds(f"point ({p.x}, {p.y}) outside {mask.width}x{mask.height} mask")


def segment_gain(mask: BinaryMask, canvas: np.ndarray, p: PlanarPoint, q: PlanarPoint, thickness: int = 1) -> int:
    """Change in squared error (times pixel count) if the p-q stroke were drawn.

    Only pixels not yet set on ``canvas`` change: each one over background adds
    an error, each one over road removes one. Negative means the reconstruction
    gets closer to the mask.
    """
    _check_inside(mask, p)
    _check_inside(mask, q)
    idx = stroke_indices((p.x, p.y), (q.x, q.y), thickness, mask.data.shape)
    return _gain(mask.data.ravel(), canvas.ravel(), idx)[0]


def _gain(flat_mask: np.ndarray, flat_canvas: np.ndarray, idx: np.ndarray) -> tuple[int, np.ndarray]:
    fresh = idx[flat_canvas[idx] == 0]
    on_road = int(flat_mask[fresh].sum())
    return len(fresh) - 2 * on_road, fresh


def connect_points(mask: BinaryMask, points, params: ConnectParams = ConnectParams()) -> AdjacencyGraph:
    """Greedy shortest-first pairing: keep a segment when it lowers the error.

    Pairs are tried by ascending length (ties by index). A pair is accepted
    when its stroke would decrease the squared error against the current
    canvas; the accepted stroke is then drawn, widened by ``canvas_pad``.
    """
    pts = tuple(points)
    if len(pts) < 2:
        return AdjacencyGraph(pts, frozenset())
    limit = params.max_pair_distance
    if limit is None:
        limit = math.hypot(mask.width, mask.height)

    xy = np.array([(p.x, p.y) for p in pts], dtype=np.float64)
    ii, jj = np.triu_indices(len(pts), k=1)
    dist = np.hypot(xy[ii, 0] - xy[jj, 0], xy[ii, 1] - xy[jj, 1])
    ok = dist <= limit
    ii, jj, dist = ii[ok], jj[ok], dist[ok]
    order = np.lexsort((jj, ii, dist))

    canvas = np.zeros(mask.data.shape, dtype=np.uint8)
    flat_mask = mask.data.ravel()
    flat_canvas = canvas.ravel()
    edges = set()
    for k in order:
        i, j = int(ii[k]), int(jj[k])
        idx = stroke_indices(xy[i], xy[j], params.thickness, mask.data.shape)
        gain, fresh = _gain(flat_mask, flat_canvas, idx)
        if gain < 0:
            edges.add((i, j))
            if params.canvas_pad:
                idx = stroke_indices(xy[i], xy[j], params.thickness + params.canvas_pad, mask.data.shape)
            flat_canvas[idx] = 1
    return AdjacencyGraph(pts, frozenset(edges))


def reconstruct(adj: AdjacencyGraph, shape: tuple[int, int], thickness: int = 1) -> np.ndarray:
    canvas = np.zeros(shape, dtype=np.uint8)
    for a, b in sorted(adj.edges):
        p, q = adj.points[a], adj.points[b]
        np.put(canvas, stroke_indices((p.x, p.y), (q.x, q.y), thickness, shape), 1)
    return canvas


def classify_points(adj: AdjacencyGraph) -> list[PointClass]:
    return [
        PointClass(p, d, Kind.NON_IMPORTANT if d == 2 else Kind.IMPORTANT)
        for p, d in zip(adj.points, adj.degrees())
    ]


def _dist(a: PlanarPoint, b: PlanarPoint) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


def prune_redundant(adj: AdjacencyGraph, classes: list[PointClass], eps: float = 2.0) -> AdjacencyGraph:
    """Remove degree-2 points lying (within ``eps`` of path excess) between their neighbours.

    Each removed point is replaced by a direct edge between its neighbours;
    repeats until nothing changes. Only points classed NonImportant on entry
    are candidates, so Important points always survive.
    """
    if len(classes) != len(adj.points):
        raise ValueError("classes do not match adjacency points")
    nb = adj.neighbors()
    alive = [True] * len(adj.points)
    candidates = [i for i, c in enumerate(classes) if c.kind is Kind.NON_IMPORTANT]

    changed = True
    while changed:
        changed = False
        for r in candidates:
            if not alive[r] or len(nb[r]) != 2:
                continue
            p, q = sorted(nb[r])
            pp, rr, qq = adj.points[p], adj.points[r], adj.points[q]
            if _dist(pp, rr) + _dist(rr, qq) - _dist(pp, qq) < eps:
                alive[r] = False
                nb[p].discard(r)
                nb[q].discard(r)
                nb[p].add(q)
                nb[q].add(p)
                nb[r] = set()
                changed = True

    remap = {}
    for i, a in enumerate(alive):
        if a:
            remap[i] = len(remap)
    points = tuple(adj.points[i] for i in remap)
    edges = frozenset(
        (remap[a], remap[b]) for a in remap for b in nb[a] if b in remap and a < b
    )
    return AdjacencyGraph(points, edges)
