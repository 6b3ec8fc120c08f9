"""Bounding boxes around a point and raw OSM downloads."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass

import requests

from ..errors import HttpFailure, PayloadTooLarge, PolarUndefined, RadiusOutOfRange
from ..network import GeoPoint

log = logging.getLogger(__name__)

METERS_PER_DEGREE = 111_195.0
MAX_RADIUS_M = 50_000.0
DEFAULT_RADIUS_M = 1_000.0
MAX_POLAR_LAT = 85.0
DEFAULT_MAX_BYTES = 64 * 1024 * 1024
OVERPASS_ENDPOINT = "https://overpass-api.de/api/interpreter"


@dataclass(frozen=True)
class BoundingBox:
    min_lat: float
    min_lon: float
    max_lat: float
    max_lon: float

    def __post_init__(self) -> None:
        if not (self.min_lat < self.max_lat and self.min_lon < self.max_lon):
            raise ValueError(f"degenerate bounding box {self}")
        if not (-90 <= self.min_lat and self.max_lat <= 90 and -180 <= self.min_lon and self.max_lon <= 180):
            raise ValueError(f"bounding box out of range {self}")

    def contains(self, other: "BoundingBox") -> bool:
        return (self.min_lat <= other.min_lat and self.min_lon <= other.min_lon
                and self.max_lat >= other.max_lat and self.max_lon >= other.max_lon)


def bbox_around(center: GeoPoint, radius_m: float) -> BoundingBox:
    """Box of half-width ``radius_m`` around ``center``; longitudes clamp at +-180."""
    if not (0 < radius_m <= MAX_RADIUS_M):
        raise RadiusOutOfRange(f"radius must be in (0, {MAX_RADIUS_M:g}] m, got {radius_m}")
    if abs(center.lat) > MAX_POLAR_LAT:
        raise PolarUndefined(f"latitude {center.lat} is beyond +-{MAX_POLAR_LAT} degrees")
    dlat = radius_m / METERS_PER_DEGREE
    dlon = dlat / math.cos(math.radians(center.lat))
    return BoundingBox(
        min_lat=center.lat - dlat,
        min_lon=max(-180.0, center.lon - dlon),
        max_lat=center.lat + dlat,
        max_lon=min(180.0, center.lon + dlon),
    )


def overpass_query(bbox: BoundingBox, timeout: float) -> str:
    box = f"{bbox.min_lat:.7f},{bbox.min_lon:.7f},{bbox.max_lat:.7f},{bbox.max_lon:.7f}"
    return f'[out:xml][timeout:{int(math.ceil(timeout))}];(way["highway"]({box});>;);out body;'


def _request(endpoint: str, bbox: BoundingBox, timeout: float, session):
    if endpoint.rstrip("/").endswith("interpreter"):
        return session.post(endpoint, data={"data": overpass_query(bbox, timeout)},
                            timeout=timeout, stream=True)
    # OSM editing API style: GET /api/0.6/map?bbox=left,bottom,right,top
    params = {"bbox": f"{bbox.min_lon:.7f},{bbox.min_lat:.7f},{bbox.max_lon:.7f},{bbox.max_lat:.7f}"}
    return session.get(endpoint, params=params, timeout=timeout, stream=True)


def fetch_osm(
    bbox: BoundingBox,
    endpoint: str = OVERPASS_ENDPOINT,
    timeout: float = 60.0,
    max_bytes: int = DEFAULT_MAX_BYTES,
    session=None,
    retry_backoff: float = 1.0,
) -> bytes:
    """Download OSM XML for ``bbox`` and return the body unmodified.

    Endpoints ending in ``interpreter`` receive an Overpass query; anything else
    is treated as a map-API URL taking a ``bbox`` parameter. A timeout is
    retried once after ``retry_backoff`` seconds.
    """
    session = session or requests.Session()
    for attempt in (1, 2):
        try:
            resp = _request(endpoint, bbox, timeout, session)
            break
        except requests.Timeout as exc:
            if attempt == 2:
                raise HttpFailure(f"{endpoint}: timed out after {timeout}s") from exc
            log.warning("timeout fetching %s, retrying once", endpoint)
            time.sleep(retry_backoff)
        except requests.RequestException as exc:
            raise HttpFailure(f"{endpoint}: {exc}") from exc

    with resp:
        if resp.status_code != 200:
            raise HttpFailure(f"{endpoint} answered HTTP {resp.status_code}")
        declared = resp.headers.get("Content-Length")
        if declared and declared.isdigit() and int(declared) > max_bytes:
            raise PayloadTooLarge(f"{endpoint} declared {declared} bytes > cap {max_bytes}")
        chunks = []
        total = 0
        try:
            for chunk in resp.iter_content(chunk_size=1 << 16):
                total += len(chunk)
                if total > max_bytes:
                    raise PayloadTooLarge(f"{endpoint} body exceeds cap of {max_bytes} bytes")
                chunks.append(chunk)
        except requests.RequestException as exc:
            raise HttpFailure(f"{endpoint}: {exc}") from exc
    return b"".join(chunks)
