"""Place-name geocoding behind a small provider interface."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping, Protocol

import requests

from ..errors import GeocodeNotFound, ProviderRejected, ProviderUnreachable
from ..network import GeoPoint

log = logging.getLogger(__name__)

DEFAULT_TIMEOUT_S = 10.0
NOMINATIM_ENDPOINT = "https://nominatim.openstreetmap.org/search"
AMAP_ENDPOINT = "https://restapi.amap.com/v3/geocode/geo"


@dataclass(frozen=True)
class GeocodeResult:
    query: str
    point: GeoPoint
    provider: str


class Geocoder(Protocol):
    label: str

    def candidates(self, name: str) -> list[GeoPoint]:
        """Candidate coordinates for ``name``, best first."""
        ...


class FixtureGeocoder:
    """Resolves names from a fixed mapping; used by tests and offline demos."""

    label = "fixture"

    def __init__(self, places: Mapping[str, GeoPoint]):
        self.places = dict(places)

    def candidates(self, name: str) -> list[GeoPoint]:
        point = self.places.get(name)
        return [point] if point is not None else []


class _HttpGeocoder:
    label = "http"

    def __init__(self, endpoint: str, timeout: float = DEFAULT_TIMEOUT_S, session=None):
        self.endpoint = endpoint
        self.timeout = timeout
        self.session = session or requests.Session()

    def _get_json(self, params: dict):
        try:
            resp = self.session.get(self.endpoint, params=params, timeout=self.timeout,
                                    headers={"User-Agent": "roadnet/0.1"})
        except requests.RequestException as exc:
            raise ProviderUnreachable(f"{self.endpoint}: {exc}") from exc
        if resp.status_code in (401, 403, 429):
            raise ProviderRejected(f"{self.endpoint} answered HTTP {resp.status_code}")
        if resp.status_code >= 400:
            raise ProviderUnreachable(f"{self.endpoint} answered HTTP {resp.status_code}")
        try:
            return resp.json()
        except ValueError as exc:
            raise ProviderUnreachable(f"{self.endpoint} returned non-JSON body") from exc


class NominatimGeocoder(_HttpGeocoder):
    label = "nominatim"

    def __init__(self, endpoint: str = NOMINATIM_ENDPOINT, timeout: float = DEFAULT_TIMEOUT_S, session=None):
        super().__init__(endpoint, timeout, session)

    def candidates(self, name: str) -> list[GeoPoint]:
        data = self._get_json({"q": name, "format": "json", "limit": 5})
        out = []
        for item in data if isinstance(data, list) else []:
            try:
                out.append(GeoPoint(lon=float(item["lon"]), lat=float(item["lat"])))
            except (KeyError, TypeError, ValueError):
                log.debug("skipping malformed candidate %r", item)
        return out


class AmapGeocoder(_HttpGeocoder):
    """Amap web-service geocoder. Note that Amap returns GCJ-02 coordinates."""

    label = "amap"

    def __init__(self, key: str, endpoint: str = AMAP_ENDPOINT, timeout: float = DEFAULT_TIMEOUT_S, session=None):
        super().__init__(endpoint, timeout, session)
        self.key = key

    def candidates(self, name: str) -> list[GeoPoint]:
        data = self._get_json({"address": name, "key": self.key, "output": "JSON"})
        if str(data.get("status")) != "1":
            info = data.get("info", "unknown error")
            if "KEY" in str(info).upper() or "LIMIT" in str(info).upper():
                raise ProviderRejected(f"amap rejected the request: {info}")
            raise ProviderUnreachable(f"amap error: {info}")
        out = []
        for item in data.get("geocodes") or []:
            try:
                lon, lat = (float(v) for v in item["location"].split(","))
                out.append(GeoPoint(lon=lon, lat=lat))
            except (KeyError, ValueError, AttributeError):
                log.debug("skipping malformed candidate %r", item)
        return out


def geocode(name: str, provider: Geocoder) -> GeocodeResult:
    if not name or not name.strip():
        raise ValueError("place name must be non-empty")
    found = provider.candidates(name.strip())
    if not found:
        raise GeocodeNotFound(f"no coordinates found for {name!r} via {provider.label}")
    return GeocodeResult(query=name, point=found[0], provider=provider.label)
