"""The four network-building tools exposed to the model."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .. import pipelines
from ..osm.fetch import DEFAULT_RADIUS_M, OVERPASS_ENDPOINT
from ..osm.geocode import Geocoder, NominatimGeocoder
from .tools import ArgSpec, Registry, Tool, ToolDescriptor

GRID = ToolDescriptor(
    "grid",
    "Generate a rectangular grid road network with the given number of rows and columns of intersections.",
    (ArgSpec("rows", "integer", help="intersections north-south, >= 1"),
     ArgSpec("cols", "integer", help="intersections east-west, >= 1")),
)
PLACE = ToolDescriptor(
    "place",
    "Download the real road network around a named place from OpenStreetMap and convert it.",
    (ArgSpec("name", "text", help="place or address exactly as the user wrote it"),
     ArgSpec("radius_m", "number", required=False, help=f"search radius in meters, default {DEFAULT_RADIUS_M:g}")),
)
FROM_IMAGE = ToolDescriptor(
    "from-image",
    "Extract a road network from a binary road mask image (white roads on black), "
    "such as a segmented satellite image.",
    (ArgSpec("path", "file path", help="mask image path given by the user"),
     ArgSpec("m_per_px", "number", required=False, help="meters per pixel, default 1")),
)
FROM_SKETCH = ToolDescriptor(
    "from-sketch",
    "Extract a road network from a photo or scan of a hand-drawn road sketch.",
    (ArgSpec("path", "file path", help="sketch image path given by the user"),
     ArgSpec("m_per_px", "number", required=False, help="meters per pixel, default 1")),
)
DESCRIPTORS = (GRID, PLACE, FROM_IMAGE, FROM_SKETCH)


@dataclass(frozen=True)
class PlaceSettings:
    geocoder: Geocoder | None = None
    endpoint: str = OVERPASS_ENDPOINT
    timeout: float = 60.0


def _out_dir(root: Path, tool: str, args: dict) -> Path:
    # distinct, reproducible directory per (tool, arguments)
    digest = hashlib.sha1(json.dumps(args, sort_keys=True, default=str).encode()).hexdigest()[:10]
    return root / f"{tool}-{digest}"


def _report(paths) -> str:
    return "\n".join(str(p) for p in paths)


def default_registry(out_root, place: PlaceSettings = PlaceSettings()) -> Registry:
    root = Path(out_root)

    def grid(args: dict) -> str:
        return _report(pipelines.build_grid(int(args["rows"]), int(args["cols"]), _out_dir(root, "grid", args)))

    def place_tool(args: dict) -> str:
        geocoder = place.geocoder or NominatimGeocoder()
        radius = float(args.get("radius_m", DEFAULT_RADIUS_M))
        return _report(pipelines.build_place(
            str(args["name"]), _out_dir(root, "place", args), geocoder,
            radius_m=radius, endpoint=place.endpoint, timeout=place.timeout,
        ))

    def from_image(args: dict) -> str:
        return _report(pipelines.build_from_image(
            args["path"], _out_dir(root, "from-image", args), m_per_px=float(args.get("m_per_px", 1.0))))

    def from_sketch(args: dict) -> str:
        return _report(pipelines.build_from_sketch(
            args["path"], _out_dir(root, "from-sketch", args), m_per_px=float(args.get("m_per_px", 1.0))))

    runners: dict[str, Callable[[dict], str]] = {
        "grid": grid, "place": place_tool, "from-image": from_image, "from-sketch": from_sketch,
    }
    return Registry(Tool(d, runners[d.name]) for d in DESCRIPTORS)


def stub_registry() -> Registry:
    """Same descriptors, but tools only echo where they would have written.

    Used to score routing decisions without building anything.
    """

    def make(name: str) -> Callable[[dict], str]:
        def run(args: dict) -> str:
            d = _out_dir(Path("out"), name, args)
            return _report([d / "Node.csv", d / "Link.csv", d / pipelines.SVG_FILE])
        return run

    return Registry(Tool(d, make(d.name)) for d in DESCRIPTORS)
