"""OSM XML parsing and conversion of highway ways into a routable graph."""

from __future__ import annotations

import logging
import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import dataclass, field

from ..errors import DanglingRef, EmptyNetwork, XmlMalformed
from ..network import (
    DEFAULT_LANES,
    GeoPoint,
    LinkRecord,
    NetworkGraph,
    NodeRecord,
    Projection,
    polyline_length_m,
)
from .fetch import METERS_PER_DEGREE

log = logging.getLogger(__name__)

DEFAULT_HIGHWAYS = frozenset(
    base + suffix
    for base in ("motorway", "trunk", "primary", "secondary", "tertiary")
    for suffix in ("", "_link")
) | {"residential", "unclassified"}

_ONEWAY_FORWARD = {"yes", "true", "1"}
_ONEWAY_BACKWARD = {"-1", "reverse"}


@dataclass(frozen=True)
class OsmWay:
    way_id: int
    refs: tuple[int, ...]
    tags: dict[str, str] = field(default_factory=dict, hash=False, compare=True)


@dataclass
class OsmDocument:
    nodes: dict[int, GeoPoint] = field(default_factory=dict)
    ways: list[OsmWay] = field(default_factory=list)


@dataclass(frozen=True)
class HighwayFilter:
    allowed: frozenset[str] = DEFAULT_HIGHWAYS

    def __post_init__(self) -> None:
        if not self.allowed:
            raise ValueError("highway filter must allow at least one value")

    def keeps(self, way: OsmWay) -> bool:
        return way.tags.get("highway") in self.allowed


def parse_osm(xml: bytes) -> OsmDocument:
    try:
        root = ET.fromstring(xml)
    except ET.ParseError as exc:
        raise XmlMalformed(f"malformed OSM XML: {exc}") from exc

    doc = OsmDocument()
    try:
        for el in root.iter("node"):
            doc.nodes[int(el.attrib["id"])] = GeoPoint(
                lon=float(el.attrib["lon"]), lat=float(el.attrib["lat"])
            )
        for el in root.iter("way"):
            way_id = int(el.attrib["id"])
            refs = tuple(int(nd.attrib["ref"]) for nd in el.iter("nd"))
            tags = {t.attrib["k"]: t.attrib["v"] for t in el.iter("tag")}
            if len(refs) < 2:
                log.debug("skipping way %d with %d node refs", way_id, len(refs))
                continue
            doc.ways.append(OsmWay(way_id, refs, tags))
    except (KeyError, ValueError) as exc:
        raise XmlMalformed(f"bad OSM element attribute: {exc}") from exc

    for way in doc.ways:
        for ref in way.refs:
            if ref not in doc.nodes:
                raise DanglingRef(f"way {way.way_id} references missing node {ref}")
    return doc


def _direction(tags: dict[str, str]) -> str:
    oneway = tags.get("oneway", "").strip().lower()
    if oneway in _ONEWAY_FORWARD or tags.get("junction") == "roundabout":
        return "forward"
    if oneway in _ONEWAY_BACKWARD:
        return "backward"
    return "both"


def _lanes(tags: dict[str, str]) -> int:
    try:
        lanes = int(tags.get("lanes", "").strip())
    except ValueError:
        return DEFAULT_LANES
    return lanes if lanes >= 1 else DEFAULT_LANES


def _dedupe_consecutive(refs: tuple[int, ...]) -> list[int]:
    out: list[int] = []
    for r in refs:
        if not out or out[-1] != r:
            out.append(r)
    return out


def _split(refs: list[int], cuts: set[int]) -> list[list[int]]:
    segments = []
    current = [refs[0]]
    for r in refs[1:]:
        current.append(r)
        if r in cuts:
            segments.append(current)
            current = [r]
    if len(current) > 1:
        segments.append(current)
    return segments


def osm_to_network(
    doc: OsmDocument,
    highway_filter: HighwayFilter = HighwayFilter(),
    projection: Projection | None = None,
) -> NetworkGraph:
    """Convert kept highway ways into directed links split at intersections.

    An OSM node becomes a graph node when it is a way endpoint or is used more
    than once by the kept ways; other vertices stay as link geometry. Segments
    that would form a self-loop or repeat an existing node pair are split at
    their middle vertex, or dropped when they have none.

    Without an explicit ``projection`` the planar frame is anchored at the
    center of the network extent with one planar unit per ~1 m of latitude.
    """
    kept = sorted((w for w in doc.ways if highway_filter.keeps(w)), key=lambda w: w.way_id)
    if not kept:
        raise EmptyNetwork("no ways match the highway filter")

    cleaned = [(w, _dedupe_consecutive(w.refs)) for w in kept]
    cleaned = [(w, refs) for w, refs in cleaned if len(refs) >= 2]
    if not cleaned:
        raise EmptyNetwork("kept ways are all degenerate")

    usage = Counter(r for _, refs in cleaned for r in refs)
    cuts = {r for r, c in usage.items() if c >= 2}
    for _, refs in cleaned:
        cuts.update((refs[0], refs[-1]))

    taken: set[tuple[int, int]] = set()
    segments: list[tuple[OsmWay, list[int], str]] = []

    def pairs(seg: list[int], direction: str) -> list[tuple[int, int]]:
        a, b = seg[0], seg[-1]
        return {"forward": [(a, b)], "backward": [(b, a)], "both": [(a, b), (b, a)]}[direction]

    def place(way: OsmWay, seg: list[int], direction: str) -> None:
        wanted = pairs(seg, direction)
        if seg[0] != seg[-1] and not taken.intersection(wanted):
            taken.update(wanted)
            segments.append((way, seg, direction))
            return
        if len(seg) < 3:
            log.info("dropping degenerate segment %s of way %d", seg, way.way_id)
            return
        mid = len(seg) // 2
        place(way, seg[: mid + 1], direction)
        place(way, seg[mid:], direction)

    for way, refs in cleaned:
        direction = _direction(way.tags)
        for seg in _split(refs, cuts):
            place(way, seg, direction)

    if not segments:
        raise EmptyNetwork("no usable road segments after splitting")

    endpoint_refs = sorted({s[0] for _, s, _ in segments} | {s[-1] for _, s, _ in segments})
    node_ids = {ref: i for i, ref in enumerate(endpoint_refs)}

    if projection is None:
        lons = [doc.nodes[r].lon for r in endpoint_refs]
        lats = [doc.nodes[r].lat for r in endpoint_refs]
        anchor = GeoPoint(lon=(min(lons) + max(lons)) / 2, lat=(min(lats) + max(lats)) / 2)
        projection = Projection(anchor=anchor, scale=1.0 / METERS_PER_DEGREE)

    nodes = [
        NodeRecord(node_ids[r], projection.to_planar(doc.nodes[r]), doc.nodes[r])
        for r in endpoint_refs
    ]

    links: list[LinkRecord] = []
    for way, seg, direction in segments:
        geometry = tuple(doc.nodes[r] for r in seg)
        length = polyline_length_m(geometry)
        lanes = _lanes(way.tags)
        forward = (node_ids[seg[0]], node_ids[seg[-1]], geometry)
        backward = (node_ids[seg[-1]], node_ids[seg[0]], geometry[::-1])
        chosen = {"forward": [forward], "backward": [backward], "both": [forward, backward]}[direction]
        for a, b, geom in chosen:
            links.append(LinkRecord(len(links), a, b, length, lanes, geom))

    return NetworkGraph(tuple(nodes), tuple(links), projection)
