"""GMNS two-file CSV emission and parsing (Node.csv / Link.csv)."""

from __future__ import annotations

import csv
import re
from pathlib import Path

from .errors import InvalidGraph, IoFailure, ParseError, ReferentialError, SchemaError
from .network import (
    DEFAULT_LANES,
    DEFAULT_PROJECTION,
    GeoPoint,
    LinkRecord,
    NetworkGraph,
    NodeRecord,
    Projection,
    polyline_length_m,
    validate_graph,
)

NODE_HEADER = ("node_id", "x_coord", "y_coord")
LINK_HEADER = ("link_id", "from_node_id", "to_node_id", "length", "lanes", "geometry")
NODE_FILE = "Node.csv"
LINK_FILE = "Link.csv"

# geometry endpoints in third-party files are snapped onto their nodes within this
SNAP_TOLERANCE_DEG = 1e-6

_WKT_RE = re.compile(r"^\s*LINESTRING\s*\((?P<body>[^()]*)\)\s*$", re.IGNORECASE)


def format_wkt(points) -> str:
    return "LINESTRING (" + ", ".join(f"{p.lon:.6f} {p.lat:.6f}" for p in points) + ")"


def parse_wkt(text: str) -> tuple[GeoPoint, ...]:
    m = _WKT_RE.match(text)
    if m is None:
        raise ParseError(f"not a WKT LINESTRING: {text!r}")
    points = []
    for pair in m.group("body").split(","):
        parts = pair.split()
        if len(parts) != 2:
            raise ParseError(f"bad coordinate pair {pair!r} in {text!r}")
        try:
            points.append(GeoPoint(lon=float(parts[0]), lat=float(parts[1])))
        except ValueError as exc:
            raise ParseError(f"bad coordinate pair {pair!r}: {exc}") from exc
    if len(points) < 2:
        raise ParseError(f"LINESTRING needs at least 2 points: {text!r}")
    return tuple(points)


def emit_gmns(g: NetworkGraph, out_dir) -> tuple[Path, Path]:
    """Write ``Node.csv`` and ``Link.csv`` into ``out_dir`` and return their absolute paths.

    Coordinates are written with 6 fractional digits, lengths with 6 as well so
    that a parse round trip keeps lengths to 1e-6 relative precision.
    """
    report = validate_graph(g)
    if report:
        raise InvalidGraph(f"refusing to emit invalid graph: {report.kinds()}", report)

    out = Path(out_dir).resolve()
    node_path = out / NODE_FILE
    link_path = out / LINK_FILE
    try:
        out.mkdir(parents=True, exist_ok=True)
        with open(node_path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(NODE_HEADER)
            for n in sorted(g.nodes, key=lambda n: n.node_id):
                w.writerow([n.node_id, f"{n.geo.lon:.6f}", f"{n.geo.lat:.6f}"])
        with open(link_path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
            w.writerow(LINK_HEADER)
            for l in sorted(g.links, key=lambda l: l.link_id):
                w.writerow([
                    l.link_id,
                    l.from_node_id,
                    l.to_node_id,
                    f"{l.length:.6f}",
                    l.lanes,
                    format_wkt(l.geometry),
                ])
    except OSError as exc:
        raise IoFailure(f"cannot write GMNS files to {out}: {exc}") from exc
    return node_path, link_path


def _read_rows(path: Path, required: tuple[str, ...]) -> list[dict[str, str]]:
    try:
        with open(path, newline="", encoding="utf-8-sig") as fh:
            reader = csv.DictReader(fh)
            header = [h.strip() for h in (reader.fieldnames or [])]
            missing = [c for c in required if c not in header]
            if missing:
                raise SchemaError(f"{path}: missing column(s) {missing}; found {header}")
            return [{k.strip(): (v or "").strip() for k, v in row.items() if k} for row in reader]
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc


def _int(value: str, what: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"{what}: expected integer, got {value!r}") from None


def _float(value: str, what: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ParseError(f"{what}: expected number, got {value!r}") from None


def _snap(p: GeoPoint, target: GeoPoint, what: str) -> GeoPoint:
    if abs(p.lon - target.lon) > SNAP_TOLERANCE_DEG or abs(p.lat - target.lat) > SNAP_TOLERANCE_DEG:
        raise ParseError(f"{what}: geometry endpoint {p} is not at node {target}")
    return target


def parse_gmns(node_csv, link_csv, projection: Projection = DEFAULT_PROJECTION) -> NetworkGraph:
    """Read a Node.csv/Link.csv pair back into a graph.

    Planar coordinates are recovered by inverting ``projection``. Missing
    ``lanes`` defaults to 2, missing ``geometry`` to a straight segment and
    missing ``length`` to the geodesic length of the geometry.
    """
    node_rows = _read_rows(Path(node_csv), NODE_HEADER)
    link_rows = _read_rows(Path(link_csv), LINK_HEADER[:3])

    nodes: list[NodeRecord] = []
    for i, row in enumerate(node_rows, start=2):
        where = f"{node_csv}:{i}"
        node_id = _int(row["node_id"], where)
        try:
            geo = GeoPoint(
                lon=_float(row["x_coord"], where), lat=_float(row["y_coord"], where)
            )
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"{where}: {exc}") from exc
        nodes.append(NodeRecord(node_id, projection.to_planar(geo), geo))

    by_id = {n.node_id: n for n in nodes}
    links: list[LinkRecord] = []
    for i, row in enumerate(link_rows, start=2):
        where = f"{link_csv}:{i}"
        link_id = _int(row["link_id"], where)
        a = _int(row["from_node_id"], where)
        b = _int(row["to_node_id"], where)
        for nid in (a, b):
            if nid not in by_id:
                raise ReferentialError(f"{where}: link {link_id} references missing node {nid}")
        if row.get("geometry"):
            geometry = list(parse_wkt(row["geometry"]))
            geometry[0] = _snap(geometry[0], by_id[a].geo, where)
            geometry[-1] = _snap(geometry[-1], by_id[b].geo, where)
            geometry = tuple(geometry)
        else:
            geometry = (by_id[a].geo, by_id[b].geo)
        lanes = _int(row["lanes"], where) if row.get("lanes") else DEFAULT_LANES
        length = (
            _float(row["length"], where) if row.get("length") else polyline_length_m(geometry)
        )
        links.append(LinkRecord(link_id, a, b, length, lanes, geometry))

    g = NetworkGraph.build(nodes, links, projection)
    report = validate_graph(g)
    if report:
        raise InvalidGraph(f"{link_csv}: invalid network {report.kinds()}", report)
    return g
