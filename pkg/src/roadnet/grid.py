"""Regular N x M grid networks with unit spacing, centered on the projection anchor."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import SpecInvalid
from .network import (
    DEFAULT_LANES,
    DEFAULT_PROJECTION,
    LinkRecord,
    NetworkGraph,
    NodeRecord,
    PlanarPoint,
    Projection,
    haversine_m,
)

MAX_GRID_NODES = 10_000


@dataclass(frozen=True)
class GridSpec:
    rows: int
    cols: int
    projection: Projection = field(default=DEFAULT_PROJECTION)
    max_nodes: int = MAX_GRID_NODES

    def check(self) -> None:
        for name, v in (("rows", self.rows), ("cols", self.cols)):
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise SpecInvalid(f"{name} must be a positive integer, got {v!r}")
        if self.rows * self.cols > self.max_nodes:
            raise SpecInvalid(
                f"{self.rows}x{self.cols} grid exceeds the {self.max_nodes}-node limit"
            )


def generate_grid(spec: GridSpec) -> NetworkGraph:
    spec.check()
    n_rows, n_cols = spec.rows, spec.cols
    proj = spec.projection
    x0 = (n_cols - 1) / 2
    y0 = (n_rows - 1) / 2

    nodes = []
    for i in range(n_rows):
        for j in range(n_cols):
            planar = PlanarPoint(j - x0, i - y0)
            nodes.append(NodeRecord(i * n_cols + j, planar, proj.to_geo(planar)))

    links: list[LinkRecord] = []

    def connect(a: NodeRecord, b: NodeRecord) -> None:
        length = haversine_m(a.geo, b.geo)
        for u, v in ((a, b), (b, a)):
            links.append(
                LinkRecord(len(links), u.node_id, v.node_id, length, DEFAULT_LANES, (u.geo, v.geo))
            )

    for i in range(n_rows):
        for j in range(n_cols):
            here = nodes[i * n_cols + j]
            if j + 1 < n_cols:
                connect(here, nodes[i * n_cols + j + 1])
            if i + 1 < n_rows:
                connect(here, nodes[(i + 1) * n_cols + j])

    return NetworkGraph(tuple(nodes), tuple(links), proj)
