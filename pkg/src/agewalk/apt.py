"""Correlate ways with nearby amenities via buffered boxes + exact projection.

Each way gets a bounding box grown by the maximum correlation distance; only
amenities inside that box are tested exactly. The exact test projects the
amenity onto every segment of the way in a local planar frame anchored at the
way's first node and keeps the minimum distance.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .geo import BBox, buffered_bbox, project_point_to_segment, to_planar
from .osmio import Amenity, AmenityKind, OsmDocument

logger = logging.getLogger(__name__)

DEFAULT_MAX_DISTANCE_M = 20.0

COUNTS_HEADER = ["way_id", "bench", "toilets", "drinking_water", "handrail"]
WITNESSES_HEADER = ["way_id", "amenity_id", "kind", "distance_m"]


@dataclass(frozen=True)
class Correlation:
    way_id: int
    amenity_id: str
    kind: AmenityKind
    distance_m: float


@dataclass(frozen=True)
class WayAmenityCounts:
    way_id: int
    counts: dict[str, int]


@dataclass
class ProjectionStats:
    """Instrumentation of one correlation run."""

    ways: int = 0
    amenities: int = 0
    pairs_tested: int = 0
    correlations: int = 0
    skipped_ways: int = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "ways": self.ways,
            "amenities": self.amenities,
            "pairs_tested": self.pairs_tested,
            "correlations": self.correlations,
        }


def build_way_bboxes(doc: OsmDocument, max_distance: float) -> dict[int, BBox]:
    """One buffered box per way with at least one resolvable node."""
    if max_distance < 0:
        raise ValueError("max_distance must be nonnegative")
    boxes: dict[int, BBox] = {}
    skipped = 0
    for way_id, way in doc.ways.items():
        points = [doc.nodes[ref].pos for ref in way.node_refs if ref in doc.nodes]
        if not points:
            skipped += 1
            continue
        boxes[way_id] = buffered_bbox(points, max_distance)
    if skipped:
        logger.warning("skipped %d ways with no resolvable nodes", skipped)
    return boxes


def _min_distance_to_way(amenity: Amenity, points, origin) -> float:
    p = to_planar(amenity.pos, origin)
    planar = [to_planar(q, origin) for q in points]
    if len(planar) == 1:
        return project_point_to_segment(p, planar[0], planar[0]).distance_m
    best = float("inf")
    for a, b in zip(planar, planar[1:]):
        d = project_point_to_segment(p, a, b).distance_m
        if d < best:
            best = d
    return best


def correlate_with_stats(
    doc: OsmDocument, amenities: list[Amenity], max_distance: float
) -> tuple[list[Correlation], ProjectionStats]:
    """Correlate plus the candidate-pair instrumentation."""
    if max_distance <= 0:
        raise ValueError("max_distance must be positive")
    stats = ProjectionStats(ways=len(doc.ways), amenities=len(amenities))
    boxes = build_way_bboxes(doc, max_distance)
    stats.skipped_ways = len(doc.ways) - len(boxes)

    out: list[Correlation] = []
    for way_id in sorted(boxes):
        box = boxes[way_id]
        way = doc.ways[way_id]
        points = [doc.nodes[ref].pos for ref in way.node_refs if ref in doc.nodes]
        origin = points[0]
        for amenity in amenities:
            if not box.contains(amenity.pos):
                continue
            stats.pairs_tested += 1
            d = _min_distance_to_way(amenity, points, origin)
            if d <= max_distance:
                out.append(Correlation(way_id, amenity.id, amenity.kind, d))
    out.sort(key=lambda c: (c.way_id, c.amenity_id))
    stats.correlations = len(out)
    return out, stats


def correlate(doc: OsmDocument, amenities: list[Amenity], max_distance: float) -> list[Correlation]:
    """All (way, amenity) pairs whose projection distance is <= max_distance."""
    return correlate_with_stats(doc, amenities, max_distance)[0]


def aggregate_counts(correlations: list[Correlation]) -> list[WayAmenityCounts]:
    """Distinct-amenity counts per way and kind, sorted by way id."""
    per_way: dict[int, dict[str, set[str]]] = {}
    for c in correlations:
        per_way.setdefault(c.way_id, {}).setdefault(c.kind.value, set()).add(c.amenity_id)
    return [
        WayAmenityCounts(way_id, {kind: len(ids) for kind, ids in sorted(kinds.items())})
        for way_id, kinds in sorted(per_way.items())
    ]


def render_correlation_csv(data, mode: str = "counts") -> str:
    """Render counts or witnesses rows as CSV text."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    if mode == "counts":
        writer.writerow(COUNTS_HEADER)
        for entry in data:
            writer.writerow(
                [entry.way_id] + [entry.counts.get(kind, 0) for kind in COUNTS_HEADER[1:]]
            )
    elif mode == "witnesses":
        writer.writerow(WITNESSES_HEADER)
        for c in sorted(data, key=lambda c: (c.way_id, c.amenity_id)):
            writer.writerow([c.way_id, c.amenity_id, c.kind.value, f"{c.distance_m:.2f}"])
    else:
        raise ValueError(f"unknown mode '{mode}'")
    return out.getvalue()


def write_correlation_csv(data, path: str | Path, mode: str = "counts") -> None:
    """Write counts or witnesses CSV to `path`."""
    text = render_correlation_csv(data, mode)
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write correlation CSV to {path}: {exc}") from exc


def read_correlation_csv(path: str | Path) -> tuple[str, list]:
    """Read a correlation CSV, detecting counts vs witnesses by header."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read correlation CSV from {path}: {exc}") from exc
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError(f"{path}: empty correlation CSV") from None
    if header == COUNTS_HEADER:
        counts = [
            WayAmenityCounts(
                int(row[0]),
                {kind: int(v) for kind, v in zip(COUNTS_HEADER[1:], row[1:]) if int(v)},
            )
            for row in reader
            if row
        ]
        return "counts", counts
    if header == WITNESSES_HEADER:
        witnesses = [
            Correlation(int(row[0]), row[1], AmenityKind(row[2]), float(row[3]))
            for row in reader
            if row
        ]
        return "witnesses", witnesses
    raise ValueError(f"{path}: unrecognized correlation CSV header {header!r}")
