"""Core value types and the great-circle distance defining the neighbor relation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

EARTH_RADIUS_KM = 6371.0  # mean Earth radius, spherical model

# A pattern is a strictly increasing tuple of feature ordinals; a row instance
# is a tuple of vertex ids aligned with it.
Pattern = tuple
RowInstance = tuple


@dataclass(frozen=True)
class GeoPoint:
    lat: float
    lng: float

    def __post_init__(self):
        if not (-90.0 <= self.lat <= 90.0) or math.isnan(self.lat):
            raise ValueError(f"latitude out of range: {self.lat}")
        if not (-180.0 <= self.lng <= 180.0) or math.isnan(self.lng):
            raise ValueError(f"longitude out of range: {self.lng}")


@dataclass(frozen=True)
class Feature:
    name: str
    ordinal: int


@dataclass(frozen=True)
class FeatureInstance:
    id: str
    feature: Feature
    location: GeoPoint


def haversine_km(lat1: float, lng1: float, lat2: float, lng2: float) -> float:
    """Haversine distance in km between two (lat, lng) pairs given in degrees."""
    p1 = math.radians(lat1)
    p2 = math.radians(lat2)
    dp = p2 - p1
    dl = math.radians(lng2 - lng1)
    a = math.sin(dp / 2) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl / 2) ** 2
    return 2 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(a)))


def great_circle_distance(a: GeoPoint, b: GeoPoint) -> float:
    return haversine_km(a.lat, a.lng, b.lat, b.lng)


def byte_order(name: str) -> bytes:
    return name.encode("utf-8")


def feature_order(names: Iterable[str], key: Callable[[str], object] = byte_order) -> list[Feature]:
    """Assign dense ordinals to feature names under a total order.

    The default order is byte-wise lexicographic on the UTF-8 encoding, so
    ``"B"`` sorts before ``"b"``.
    """
    names = list(names)
    if not names:
        raise ValueError("no feature names given")
    seen = set()
    for n in names:
        if not n:
            raise ValueError("feature name must be non-empty")
        if n in seen:
            raise ValueError(f"duplicate feature name: {n!r}")
        seen.add(n)
    return [Feature(n, i) for i, n in enumerate(sorted(names, key=key))]


def canonical_pattern(ordinals: Iterable[int]) -> Pattern:
    """Sort and validate a collection of ordinals into canonical pattern form."""
    p = tuple(sorted(ordinals))
    if not p:
        raise ValueError("pattern must contain at least one feature")
    if any(a == b for a, b in zip(p, p[1:])):
        raise ValueError(f"pattern has repeated features: {p}")
    if p[0] < 0:
        raise ValueError(f"negative feature ordinal in {p}")
    return p


def is_canonical(pattern: Sequence[int]) -> bool:
    return len(pattern) >= 1 and all(a < b for a, b in zip(pattern, pattern[1:]))
