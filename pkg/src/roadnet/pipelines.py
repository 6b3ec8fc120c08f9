"""End-to-end builders shared by the command line and the agent tools.

Each builder writes GMNS files plus an SVG preview into ``out_dir`` and
returns the written paths in a fixed order.
"""

from __future__ import annotations

import logging
from pathlib import Path

from .extract.connect import ConnectParams
from .extract.corners import CornerParams
from .extract.mask import load_grayscale, load_mask, preprocess_sketch
from .extract.pipeline import extract_network
from .gmns import emit_gmns
from .grid import GridSpec, generate_grid
from .network import DEFAULT_PROJECTION, NetworkGraph, Projection
from .osm.convert import HighwayFilter, osm_to_network, parse_osm
from .osm.fetch import DEFAULT_MAX_BYTES, DEFAULT_RADIUS_M, OVERPASS_ENDPOINT, bbox_around, fetch_osm
from .osm.geocode import Geocoder, geocode
from .render import RenderStyle, write_svg

log = logging.getLogger(__name__)

SVG_FILE = "network.svg"
RAW_OSM_FILE = "raw.osm"


def write_outputs(g: NetworkGraph, out_dir, style: RenderStyle = RenderStyle()) -> list[Path]:
    out = Path(out_dir)
    node_path, link_path = emit_gmns(g, out)
    svg_path = write_svg(g, out / SVG_FILE, style)
    return [node_path, link_path, svg_path]


def build_grid(rows: int, cols: int, out_dir, projection: Projection = DEFAULT_PROJECTION) -> list[Path]:
    g = generate_grid(GridSpec(rows, cols, projection))
    return write_outputs(g, out_dir)


def build_place(
    name: str,
    out_dir,
    geocoder: Geocoder,
    radius_m: float = DEFAULT_RADIUS_M,
    endpoint: str = OVERPASS_ENDPOINT,
    timeout: float = 60.0,
    max_bytes: int = DEFAULT_MAX_BYTES,
    highway_filter: HighwayFilter = HighwayFilter(),
    session=None,
) -> list[Path]:
    """Geocode ``name``, download the surrounding OSM data and convert it.

    The raw download is kept next to the outputs as ``raw.osm``.
    """
    hit = geocode(name, geocoder)
    log.info("%s -> (%.6f, %.6f) via %s", name, hit.point.lat, hit.point.lon, hit.provider)
    bbox = bbox_around(hit.point, radius_m)
    raw = fetch_osm(bbox, endpoint=endpoint, timeout=timeout, max_bytes=max_bytes, session=session)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    raw_path = out / RAW_OSM_FILE
    raw_path.write_bytes(raw)
    g = osm_to_network(parse_osm(raw), highway_filter)
    return write_outputs(g, out) + [raw_path]


def build_from_image(
    mask_path,
    out_dir,
    m_per_px: float = 1.0,
    cp: CornerParams = CornerParams(),
    kp: ConnectParams = ConnectParams(),
    dump_dir=None,
) -> list[Path]:
    mask = load_mask(mask_path)
    g = extract_network(mask, cp, kp, m_per_px=m_per_px, dump_dir=dump_dir)
    return write_outputs(g, out_dir)


def build_from_sketch(
    image_path,
    out_dir,
    m_per_px: float = 1.0,
    cp: CornerParams = CornerParams(),
    kp: ConnectParams = ConnectParams(),
    dump_dir=None,
) -> list[Path]:
    mask = preprocess_sketch(load_grayscale(image_path))
    g = extract_network(mask, cp, kp, m_per_px=m_per_px, dump_dir=dump_dir)
    return write_outputs(g, out_dir)
