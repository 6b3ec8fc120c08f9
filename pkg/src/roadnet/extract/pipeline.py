"""Binary mask to network graph: corners, two connection rounds, pruning."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw

from ..errors import NoCornersFound
from ..network import (
    DEFAULT_LANES,
    DEFAULT_PROJECTION,
    LinkRecord,
    NetworkGraph,
    NodeRecord,
    PlanarPoint,
    Projection,
)
from ..osm.fetch import METERS_PER_DEGREE
from .connect import (
    AdjacencyGraph,
    ConnectParams,
    classify_points,
    connect_points,
    prune_redundant,
    reconstruct,
)
from .corners import CornerParams, shi_tomasi_corners
from .mask import BinaryMask
from .refine import RefineParams, refine_corners

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExtractionStages:
    corners: list[PlanarPoint]
    refined: list[PlanarPoint]
    first_round: AdjacencyGraph
    pruned: AdjacencyGraph
    final: AdjacencyGraph


def extract_adjacency(
    mask: BinaryMask,
    cp: CornerParams = CornerParams(),
    kp: ConnectParams = ConnectParams(),
    rp: RefineParams = RefineParams(),
) -> ExtractionStages:
    corners = shi_tomasi_corners(mask, cp)
    if not corners:
        raise NoCornersFound("mask has no corner features (blank or uniform)")
    refined = refine_corners(mask, corners, rp, cp.min_distance)
    first = connect_points(mask, refined, kp)
    pruned = prune_redundant(first, classify_points(first), kp.collinearity_eps)
    second = connect_points(mask, pruned.points, kp)

    # points left unconnected after the second round are dropped
    deg = second.degrees()
    keep = [i for i, d in enumerate(deg) if d > 0]
    remap = {old: new for new, old in enumerate(keep)}
    final = AdjacencyGraph(
        tuple(second.points[i] for i in keep),
        frozenset((remap[a], remap[b]) for a, b in second.edges),
    )
    log.debug("corners=%d refined=%d first_edges=%d pruned_points=%d final_points=%d final_edges=%d",
              len(corners), len(refined), len(first.edges), len(pruned.points), len(final.points), len(final.edges))
    return ExtractionStages(corners, refined, first, pruned, final)


def pixel_to_planar(p: PlanarPoint, width: int, height: int) -> PlanarPoint:
    """Image (column, row) to a north-up frame centered on the image."""
    return PlanarPoint(p.x - (width - 1) / 2, (height - 1) / 2 - p.y)


def adjacency_to_graph(
    adj: AdjacencyGraph,
    width: int,
    height: int,
    projection: Projection,
    m_per_px: float,
) -> NetworkGraph:
    nodes = []
    for i, p in enumerate(adj.points):
        planar = pixel_to_planar(p, width, height)
        nodes.append(NodeRecord(i, planar, projection.to_geo(planar)))
    links = []
    for a, b in sorted(adj.edges):
        pa, pb = adj.points[a], adj.points[b]
        length = math.hypot(pa.x - pb.x, pa.y - pb.y) * m_per_px
        for u, v in ((a, b), (b, a)):
            links.append(
                LinkRecord(len(links), u, v, length, DEFAULT_LANES, (nodes[u].geo, nodes[v].geo))
            )
    return NetworkGraph(tuple(nodes), tuple(links), projection)


def extract_network(
    mask: BinaryMask,
    cp: CornerParams = CornerParams(),
    kp: ConnectParams = ConnectParams(),
    proj: Projection | None = None,
    m_per_px: float = 1.0,
    dump_dir=None,
    rp: RefineParams = RefineParams(),
) -> NetworkGraph:
    """Extract a road graph from ``mask``.

    Without ``proj`` the image center sits on the default anchor and one pixel
    spans ``m_per_px`` meters of latitude. ``dump_dir`` receives the mask, a
    corner overlay and the first-round reconstruction as PNG files.
    """
    if m_per_px <= 0:
        raise ValueError("m_per_px must be > 0")
    if proj is None:
        proj = Projection(anchor=DEFAULT_PROJECTION.anchor, scale=m_per_px / METERS_PER_DEGREE)
    stages = extract_adjacency(mask, cp, kp, rp)
    if dump_dir is not None:
        dump_stages(mask, stages, dump_dir, kp.thickness)
    if not stages.final.edges:
        raise NoCornersFound("no corner pair could be connected along the road pixels")
    return adjacency_to_graph(stages.final, mask.width, mask.height, proj, m_per_px)


def dump_stages(mask: BinaryMask, stages: ExtractionStages, out_dir, thickness: int = 1) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = [out / "mask.png", out / "corners.png", out / "first_round.png"]
    mask.to_image().save(paths[0])

    overlay = Image.fromarray(np.stack([mask.data * 255] * 3, axis=-1).astype(np.uint8))
    draw = ImageDraw.Draw(overlay)
    for p in stages.corners:
        draw.ellipse([p.x - 3, p.y - 3, p.x + 3, p.y + 3], outline=(255, 0, 0))
    for p in stages.refined:
        draw.ellipse([p.x - 2, p.y - 2, p.x + 2, p.y + 2], outline=(0, 160, 255))
    overlay.save(paths[1])

    canvas = reconstruct(stages.first_round, mask.data.shape, thickness)
    Image.fromarray(canvas * 255).save(paths[2])
    return paths
