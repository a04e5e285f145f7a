"""Geometric primitives shared across the pipeline.

All geographic math uses a spherical earth (R = 6,371,000 m) and a local
equirectangular planar frame for the short-range projection work, which is
accurate well below the distance thresholds we care about at city scale.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

EARTH_RADIUS_M = 6_371_000.0

# Beyond this separation the local planar frame degrades noticeably.
_PLANAR_LIMIT_DEG = 1.0


@dataclass(frozen=True)
class LatLon:
    """A WGS84-style geographic coordinate in decimal degrees."""

    lat: float
    lon: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise ValueError(f"non-finite coordinate ({self.lat}, {self.lon})")
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude {self.lat} out of range [-90, 90]")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"longitude {self.lon} out of range [-180, 180]")


@dataclass(frozen=True)
class PlanarPoint:
    """Local planar coordinate: meters east (x) and north (y) of an origin."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite planar point ({self.x}, {self.y})")


@dataclass(frozen=True)
class SegmentProjection:
    """Foot point of a point projected onto a closed segment."""

    t: float
    foot: PlanarPoint
    distance_m: float


@dataclass(frozen=True)
class BBox:
    """Axis-aligned geographic bounding box in degrees."""

    min_lat: float
    min_lon: float
    max_lat: float
    max_lon: float

    def __post_init__(self) -> None:
        if self.min_lat > self.max_lat or self.min_lon > self.max_lon:
            raise ValueError("bounding box min exceeds max")

    def contains(self, p: LatLon) -> bool:
        return (
            self.min_lat <= p.lat <= self.max_lat
            and self.min_lon <= p.lon <= self.max_lon
        )


def haversine_distance(a: LatLon, b: LatLon) -> float:
    """Great-circle distance between two coordinates in meters."""
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dphi = math.radians(b.lat - a.lat)
    dlmb = math.radians(b.lon - a.lon)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlmb / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


def to_planar(p: LatLon, origin: LatLon) -> PlanarPoint:
    """Map a coordinate into the local meter frame centered at `origin`.

    Equirectangular: x = R * dlon * cos(origin.lat), y = R * dlat.
    Intended for city-scale separations (< 1 degree on both axes).
    """
    if abs(p.lat - origin.lat) > _PLANAR_LIMIT_DEG or abs(p.lon - origin.lon) > _PLANAR_LIMIT_DEG:
        warnings.warn(
            "planar projection beyond 1 degree of origin; accuracy degraded",
            stacklevel=2,
        )
    x = EARTH_RADIUS_M * math.radians(p.lon - origin.lon) * math.cos(math.radians(origin.lat))
    y = EARTH_RADIUS_M * math.radians(p.lat - origin.lat)
    return PlanarPoint(x, y)


def from_planar(pt: PlanarPoint, origin: LatLon) -> LatLon:
    """Inverse of :func:`to_planar` for the same origin."""
    lat = origin.lat + math.degrees(pt.y / EARTH_RADIUS_M)
    lon = origin.lon + math.degrees(pt.x / (EARTH_RADIUS_M * math.cos(math.radians(origin.lat))))
    return LatLon(lat, lon)


def project_point_to_segment(p: PlanarPoint, a: PlanarPoint, b: PlanarPoint) -> SegmentProjection:
    """Perpendicular foot-point projection of `p` onto segment a-b.

    The parameter t is clamped to [0, 1], so the returned distance is the
    minimum distance from `p` to the closed segment. A degenerate segment
    (a == b) projects onto a with t = 0.
    """
    abx = b.x - a.x
    aby = b.y - a.y
    denom = abx * abx + aby * aby
    if denom == 0.0:
        t = 0.0
    else:
        t = ((p.x - a.x) * abx + (p.y - a.y) * aby) / denom
        t = min(1.0, max(0.0, t))
    foot = PlanarPoint(a.x + t * abx, a.y + t * aby)
    return SegmentProjection(t, foot, math.hypot(p.x - foot.x, p.y - foot.y))


def buffered_bbox(points: list[LatLon], buffer_m: float) -> BBox:
    """Bounding box of `points`, each side pushed outward by >= buffer_m.

    The meter-to-degree conversion is conservative: longitude uses
    cos(max |lat|) of the geometry so the box may over-cover but never
    under-covers.
    """
    if not points:
        raise ValueError("empty geometry")
    if buffer_m < 0:
        raise ValueError("buffer must be nonnegative")
    min_lat = min(p.lat for p in points)
    max_lat = max(p.lat for p in points)
    min_lon = min(p.lon for p in points)
    max_lon = max(p.lon for p in points)
    dlat = math.degrees(buffer_m / EARTH_RADIUS_M)
    extreme_lat = min(89.0, max(abs(min_lat - dlat), abs(max_lat + dlat)))
    dlon = dlat / math.cos(math.radians(extreme_lat))
    return BBox(
        min_lat=min_lat - dlat,
        min_lon=min_lon - dlon,
        max_lat=max_lat + dlat,
        max_lon=max_lon + dlon,
    )
