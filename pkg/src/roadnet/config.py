"""Settings: INI file, overridden by command-line flags, overridden by env vars."""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Mapping
from urllib.parse import urlparse

from .agent.model import ENV_API_KEY, ENV_BASE_URL, ENV_MODEL
from .network import DEFAULT_ANCHOR_LAT, DEFAULT_ANCHOR_LON, DEFAULT_SCALE, GeoPoint, Projection
from .osm.fetch import DEFAULT_MAX_BYTES, OVERPASS_ENDPOINT
from .osm.geocode import AMAP_ENDPOINT, NOMINATIM_ENDPOINT

ENV_CONFIG = "ROADNET_CONFIG"
SECTION = "roadnet"

# field name -> environment variable
ENV_VARS = {
    "anchor_lat": "ROADNET_ANCHOR_LAT",
    "anchor_lon": "ROADNET_ANCHOR_LON",
    "scale": "ROADNET_SCALE",
    "geocoder": "ROADNET_GEOCODER",
    "geocoder_endpoint": "ROADNET_GEOCODER_ENDPOINT",
    "geocoder_key": "ROADNET_GEOCODER_KEY",
    "osm_endpoint": "ROADNET_OSM_ENDPOINT",
    "model_base_url": ENV_BASE_URL,
    "model_name": ENV_MODEL,
    "model_api_key": ENV_API_KEY,
    "out_dir": "ROADNET_OUT_DIR",
    "max_download_bytes": "ROADNET_MAX_DOWNLOAD_BYTES",
}


@dataclass(frozen=True)
class Config:
    anchor_lat: float = DEFAULT_ANCHOR_LAT
    anchor_lon: float = DEFAULT_ANCHOR_LON
    scale: float = DEFAULT_SCALE
    geocoder: str = "nominatim"
    geocoder_endpoint: str = ""
    geocoder_key: str = ""
    osm_endpoint: str = OVERPASS_ENDPOINT
    model_base_url: str = ""
    model_name: str = "gpt-4o-mini"
    model_api_key: str = ""
    out_dir: str = "out"
    max_download_bytes: int = DEFAULT_MAX_BYTES

    def __post_init__(self) -> None:
        if not self.scale > 0:
            raise ValueError(f"scale must be > 0, got {self.scale}")
        if self.geocoder not in ("nominatim", "amap"):
            raise ValueError(f"geocoder must be 'nominatim' or 'amap', got {self.geocoder!r}")
        for name in ("geocoder_endpoint", "osm_endpoint", "model_base_url"):
            url = getattr(self, name)
            if url:
                parts = urlparse(url)
                if not (parts.scheme in ("http", "https") and parts.netloc):
                    raise ValueError(f"{name} must be an absolute http(s) URL, got {url!r}")
        if self.max_download_bytes <= 0:
            raise ValueError("max_download_bytes must be > 0")

    @property
    def projection(self) -> Projection:
        return Projection(GeoPoint(lon=self.anchor_lon, lat=self.anchor_lat), self.scale)

    def geocoder_url(self) -> str:
        if self.geocoder_endpoint:
            return self.geocoder_endpoint
        return AMAP_ENDPOINT if self.geocoder == "amap" else NOMINATIM_ENDPOINT


_TYPES = {f.name: f.type for f in fields(Config)}


def _coerce(name: str, value: str):
    kind = _TYPES[name]
    if kind in ("float", float):
        return float(value)
    if kind in ("int", int):
        return int(value)
    return value


def default_config_paths(env: Mapping[str, str]) -> list[Path]:
    if env.get(ENV_CONFIG):
        return [Path(env[ENV_CONFIG])]
    return [Path("roadnet.ini"), Path.home() / ".config" / "roadnet" / "config.ini"]


def load_config(
    path=None,
    overrides: Mapping[str, object] | None = None,
    env: Mapping[str, str] | None = None,
) -> Config:
    """Build a Config from the first readable INI file, then ``overrides``
    (flag values; None entries are ignored), then environment variables."""
    env = os.environ if env is None else env
    values: dict[str, object] = {}

    candidates = [Path(path)] if path else default_config_paths(env)
    for p in candidates:
        if p.is_file():
            parser = configparser.ConfigParser()
            parser.read(p, encoding="utf-8")
            if parser.has_section(SECTION):
                for key, raw in parser.items(SECTION):
                    if key not in _TYPES:
                        raise ValueError(f"{p}: unknown setting {key!r}")
                    values[key] = _coerce(key, raw)
            break
        if path:
            raise ValueError(f"config file {path} not found")

    for key, val in (overrides or {}).items():
        if val is not None:
            if key not in _TYPES:
                raise ValueError(f"unknown setting {key!r}")
            values[key] = val

    for key, var in ENV_VARS.items():
        if env.get(var):
            values[key] = _coerce(key, env[var])

    return replace(Config(), **values)
