"""Graph model, equirectangular projection and great-circle distance."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ProjectionOutOfRange

EARTH_RADIUS_M = 6_371_000.0
DEFAULT_SCALE = 0.004
# lat first, as (39.125, 161.567); lies over the Pacific but kept as the default
DEFAULT_ANCHOR_LAT = 39.125
DEFAULT_ANCHOR_LON = 161.567
DEFAULT_LANES = 2
GEO_TOLERANCE_DEG = 1e-9


@dataclass(frozen=True)
class GeoPoint:
    lon: float
    lat: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lon) and math.isfinite(self.lat)):
            raise ValueError(f"non-finite coordinate: {self}")
        if not (-180.0 <= self.lon <= 180.0 and -90.0 <= self.lat <= 90.0):
            raise ValueError(f"coordinate out of range: lon={self.lon} lat={self.lat}")


@dataclass(frozen=True)
class PlanarPoint:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite planar point: {self}")


@dataclass(frozen=True)
class Projection:
    """Linear degrees-per-unit mapping about ``anchor``, same scale on both axes."""

    anchor: GeoPoint = field(
        default_factory=lambda: GeoPoint(lon=DEFAULT_ANCHOR_LON, lat=DEFAULT_ANCHOR_LAT)
    )
    scale: float = DEFAULT_SCALE

    def __post_init__(self) -> None:
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise ValueError(f"projection scale must be > 0, got {self.scale}")

    def to_geo(self, p: PlanarPoint) -> GeoPoint:
        return geo_project(p, self)

    def to_planar(self, g: GeoPoint) -> PlanarPoint:
        return PlanarPoint(
            (g.lon - self.anchor.lon) / self.scale,
            (g.lat - self.anchor.lat) / self.scale,
        )


DEFAULT_PROJECTION = Projection()


def geo_project(p: PlanarPoint, proj: Projection) -> GeoPoint:
    lon = proj.anchor.lon + p.x * proj.scale
    lat = proj.anchor.lat + p.y * proj.scale
    if not (-180.0 <= lon <= 180.0 and -90.0 <= lat <= 90.0):
        raise ProjectionOutOfRange(
            f"planar ({p.x}, {p.y}) projects to lon={lon}, lat={lat}"
        )
    return GeoPoint(lon=lon, lat=lat)


def haversine_m(a: GeoPoint, b: GeoPoint) -> float:
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dphi = phi2 - phi1
    dlambda = math.radians(b.lon - a.lon)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlambda / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(max(0.0, h))))


def polyline_length_m(points: Sequence[GeoPoint]) -> float:
    return sum(haversine_m(a, b) for a, b in zip(points, points[1:]))


@dataclass(frozen=True)
class NodeRecord:
    node_id: int
    planar: PlanarPoint
    geo: GeoPoint


@dataclass(frozen=True)
class LinkRecord:
    link_id: int
    from_node_id: int
    to_node_id: int
    length: float
    lanes: int
    geometry: tuple[GeoPoint, ...]


@dataclass(frozen=True)
class NetworkGraph:
    nodes: tuple[NodeRecord, ...] = ()
    links: tuple[LinkRecord, ...] = ()
    projection: Projection = DEFAULT_PROJECTION

    def node_by_id(self) -> dict[int, NodeRecord]:
        return {n.node_id: n for n in self.nodes}

    @classmethod
    def build(
        cls,
        nodes: Iterable[NodeRecord],
        links: Iterable[LinkRecord],
        projection: Projection = DEFAULT_PROJECTION,
    ) -> "NetworkGraph":
        return cls(
            tuple(sorted(nodes, key=lambda n: n.node_id)),
            tuple(sorted(links, key=lambda l: l.link_id)),
            projection,
        )


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    def __bool__(self) -> bool:
        return bool(self.violations)

    def __len__(self) -> int:
        return len(self.violations)

    def kinds(self) -> list[str]:
        return [v.kind for v in self.violations]

    def add(self, kind: str, detail: str) -> None:
        self.violations.append(Violation(kind, detail))


def _geo_close(a: GeoPoint, b: GeoPoint, tol: float = GEO_TOLERANCE_DEG) -> bool:
    return abs(a.lon - b.lon) <= tol and abs(a.lat - b.lat) <= tol


def validate_graph(g: NetworkGraph) -> ValidationReport:
    """Collect every violated graph invariant; an empty report means valid."""
    report = ValidationReport()

    for node_id, count in sorted(Counter(n.node_id for n in g.nodes).items()):
        if count > 1:
            report.add("DuplicateId", f"node_id {node_id} appears {count} times")
    for link_id, count in sorted(Counter(l.link_id for l in g.links).items()):
        if count > 1:
            report.add("DuplicateId", f"link_id {link_id} appears {count} times")

    for n in g.nodes:
        if n.node_id < 0:
            report.add("NegativeId", f"node_id {n.node_id}")
        try:
            expected = geo_project(n.planar, g.projection)
        except ProjectionOutOfRange as exc:
            report.add("ProjectionMismatch", f"node {n.node_id}: {exc}")
            continue
        if not _geo_close(expected, n.geo):
            report.add(
                "ProjectionMismatch",
                f"node {n.node_id}: geo {n.geo} != projected {expected}",
            )

    nodes = g.node_by_id()
    seen_pairs: set[tuple[int, int]] = set()
    for l in g.links:
        if l.link_id < 0:
            report.add("NegativeId", f"link_id {l.link_id}")
        dangling = [nid for nid in (l.from_node_id, l.to_node_id) if nid not in nodes]
        for nid in dangling:
            report.add("DanglingEndpoint", f"link {l.link_id} references missing node {nid}")
        if l.from_node_id == l.to_node_id:
            report.add("SelfLoop", f"link {l.link_id} starts and ends at node {l.from_node_id}")
        pair = (l.from_node_id, l.to_node_id)
        if pair in seen_pairs:
            report.add("DuplicatePair", f"link {l.link_id} repeats {pair}")
        seen_pairs.add(pair)
        if l.lanes < 1:
            report.add("BadLanes", f"link {l.link_id} has lanes={l.lanes}")
        if not (math.isfinite(l.length) and l.length >= 0):
            report.add("BadLength", f"link {l.link_id} has length={l.length}")
        if len(l.geometry) < 2:
            report.add("ShortGeometry", f"link {l.link_id} has {len(l.geometry)} vertices")
        elif not dangling:
            if not _geo_close(l.geometry[0], nodes[l.from_node_id].geo):
                report.add("GeometryMismatch", f"link {l.link_id} does not start at its from-node")
            if not _geo_close(l.geometry[-1], nodes[l.to_node_id].geo):
                report.add("GeometryMismatch", f"link {l.link_id} does not end at its to-node")
    return report
