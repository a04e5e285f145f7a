"""Build the immutable routing graph and its on-disk cache."""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .apt import Correlation, WayAmenityCounts
from .geo import LatLon, haversine_distance
from .osmio import AmenityKind, OsmDocument

logger = logging.getLogger(__name__)

GRAPH_CACHE_FORMAT = "agewalk-graph"
GRAPH_CACHE_VERSION = 1

DEFAULT_WALKABLE = frozenset(
    {
        "footway",
        "path",
        "pedestrian",
        "living_street",
        "residential",
        "service",
        "steps",
        "track",
        "unclassified",
        "tertiary",
        "secondary",
        "primary",
    }
)

# Stairs must register as steep even on a flat raster.
STEPS_GRADE = 0.35


@dataclass(frozen=True)
class BuildConfig:
    walkable_highway_values: frozenset[str] = DEFAULT_WALKABLE
    walking_speed_mps: float = 1.33
    max_grade_clamp: float = 1.0

    def __post_init__(self) -> None:
        if self.walking_speed_mps <= 0:
            raise ValueError("walking speed must be positive")

    def as_dict(self) -> dict:
        return {
            "walkable_highway_values": sorted(self.walkable_highway_values),
            "walking_speed_mps": self.walking_speed_mps,
            "max_grade_clamp": self.max_grade_clamp,
        }


@dataclass(frozen=True)
class Vertex:
    id: int
    osm_node_id: int
    pos: LatLon
    elevation: float | None


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    way_id: int
    length_m: float
    grade: float
    grade_unknown: bool
    amenity_ids: dict[str, frozenset[str]]
    highway_class: str
    way_length_m: float


@dataclass(frozen=True)
class RoutingGraph:
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    adjacency: tuple[tuple[int, ...], ...]  # forward-star: vertex -> edge indices
    config: BuildConfig
    metadata: dict = field(default_factory=dict)


def _amenity_sets_by_way(counts_or_witnesses) -> dict[int, dict[str, frozenset[str]]]:
    """Per-way amenity id sets from APT output.

    Witness rows carry real amenity ids. Counts rows only carry numbers, so
    synthetic way-scoped ids are minted; cross-way dedup of route metrics is
    then unavailable, which is inherent to counts mode.
    """
    out: dict[int, dict[str, set[str]]] = {}
    for entry in counts_or_witnesses:
        if isinstance(entry, Correlation):
            out.setdefault(entry.way_id, {}).setdefault(entry.kind.value, set()).add(
                entry.amenity_id
            )
        elif isinstance(entry, WayAmenityCounts):
            kinds = out.setdefault(entry.way_id, {})
            for kind, n in entry.counts.items():
                kinds.setdefault(kind, set()).update(
                    f"way{entry.way_id}:{kind}:{i}" for i in range(n)
                )
        else:
            raise TypeError(f"unsupported correlation entry {type(entry).__name__}")
    return {
        way_id: {kind: frozenset(ids) for kind, ids in kinds.items()}
        for way_id, kinds in out.items()
    }


def _edge_grade(
    elev_u: float | None,
    elev_v: float | None,
    length: float,
    highway: str,
    clamp: float,
) -> tuple[float, bool]:
    unknown = elev_u is None or elev_v is None
    if highway == "steps":
        if unknown:
            return STEPS_GRADE, True
        sign = 1.0 if elev_v >= elev_u else -1.0
        return sign * STEPS_GRADE, False
    if unknown:
        return 0.0, True
    grade = (elev_v - elev_u) / length
    return max(-clamp, min(clamp, grade)), False


def build_graph(
    doc: OsmDocument,
    counts_or_witnesses,
    elevations: dict[int, float],
    config: BuildConfig = BuildConfig(),
) -> RoutingGraph:
    """Construct the bidirectional pedestrian graph from the pipeline inputs."""
    amenity_sets = _amenity_sets_by_way(counts_or_witnesses)

    walkable = [
        way
        for way in sorted(doc.ways.values(), key=lambda w: w.id)
        if way.tags.get("highway") in config.walkable_highway_values
    ]

    # First pass: collect usable segments per way.
    segments: list[tuple[int, int, int, float, str, float]] = []  # (u_osm, v_osm, way_id, len, hwy, way_len)
    skipped_ways = 0
    ways_consumed = 0
    for way in walkable:
        if any(ref not in doc.nodes for ref in way.node_refs) or len(way.node_refs) < 2:
            skipped_ways += 1
            continue
        pairs = []
        way_length = 0.0
        for a, b in zip(way.node_refs, way.node_refs[1:]):
            if a == b:
                continue
            length = haversine_distance(doc.nodes[a].pos, doc.nodes[b].pos)
            if length <= 0.0:
                continue
            pairs.append((a, b, length))
            way_length += length
        if not pairs:
            skipped_ways += 1
            continue
        ways_consumed += 1
        highway = way.tags.get("highway", "")
        for a, b, length in pairs:
            segments.append((a, b, way.id, length, highway, way_length))
    if skipped_ways:
        logger.warning("skipped %d ways (unresolved refs or no usable segments)", skipped_ways)

    used_osm_ids = sorted({n for seg in segments for n in (seg[0], seg[1])})
    index = {osm_id: i for i, osm_id in enumerate(used_osm_ids)}
    vertices = tuple(
        Vertex(i, osm_id, doc.nodes[osm_id].pos, elevations.get(osm_id))
        for i, osm_id in enumerate(used_osm_ids)
    )

    edges: list[Edge] = []
    for a, b, way_id, length, highway, way_length in segments:
        sets = amenity_sets.get(way_id, {})
        grade, unknown = _edge_grade(
            elevations.get(a), elevations.get(b), length, highway, config.max_grade_clamp
        )
        edges.append(
            Edge(index[a], index[b], way_id, length, grade, unknown, sets, highway, way_length)
        )
        edges.append(
            Edge(index[b], index[a], way_id, length, -grade, unknown, sets, highway, way_length)
        )

    adjacency: list[list[int]] = [[] for _ in vertices]
    for i, edge in enumerate(edges):
        adjacency[edge.u].append(i)

    counts_per_kind = {
        kind.value: len(
            {aid for sets in amenity_sets.values() for aid in sets.get(kind.value, ())}
        )
        for kind in AmenityKind
    }
    config_hash = hashlib.sha256(
        json.dumps(config.as_dict(), sort_keys=True).encode()
    ).hexdigest()[:16]
    metadata = {
        "config_hash": config_hash,
        "vertices": len(vertices),
        "edges": len(edges),
        "ways": ways_consumed,
        "skipped_ways": skipped_ways,
        "amenities_attached": counts_per_kind,
    }
    return RoutingGraph(
        vertices=vertices,
        edges=tuple(edges),
        adjacency=tuple(tuple(a) for a in adjacency),
        config=config,
        metadata=metadata,
    )


def nearest_vertex(graph: RoutingGraph, p: LatLon) -> int:
    """Vertex closest to `p` by great-circle distance; ties go to lower id."""
    if not graph.vertices:
        raise ValueError("empty graph")
    best_id = -1
    best_d = float("inf")
    for vertex in graph.vertices:
        d = haversine_distance(vertex.pos, p)
        if d < best_d:
            best_d = d
            best_id = vertex.id
    return best_id


def _quantile(sorted_values: list[float], q: float) -> float:
    if not sorted_values:
        return 0.0
    pos = q * (len(sorted_values) - 1)
    lo = int(pos)
    hi = min(lo + 1, len(sorted_values) - 1)
    frac = pos - lo
    return sorted_values[lo] * (1 - frac) + sorted_values[hi] * frac


def graph_stats(graph: RoutingGraph) -> dict:
    """Summary counts and the grade distribution of the graph."""
    grades = sorted(e.grade for e in graph.edges)
    return {
        "vertices": len(graph.vertices),
        "edges": len(graph.edges),
        "ways": graph.metadata.get("ways", 0),
        "amenities_attached": graph.metadata.get("amenities_attached", {}),
        "grade_quantiles": {
            "min": grades[0] if grades else 0.0,
            "p25": _quantile(grades, 0.25),
            "median": _quantile(grades, 0.5),
            "p75": _quantile(grades, 0.75),
            "max": grades[-1] if grades else 0.0,
        },
    }


def save_graph(graph: RoutingGraph, path: str | Path) -> None:
    """Write the versioned graph cache. Output bytes are deterministic."""
    payload = {
        "format": GRAPH_CACHE_FORMAT,
        "version": GRAPH_CACHE_VERSION,
        "config": graph.config.as_dict(),
        "metadata": graph.metadata,
        "vertices": [
            [v.osm_node_id, v.pos.lat, v.pos.lon, v.elevation] for v in graph.vertices
        ],
        "edges": [
            [
                e.u,
                e.v,
                e.way_id,
                e.length_m,
                e.grade,
                e.grade_unknown,
                e.highway_class,
                e.way_length_m,
                {kind: sorted(ids) for kind, ids in sorted(e.amenity_ids.items())},
            ]
            for e in graph.edges
        ],
    }
    Path(path).write_text(
        json.dumps(payload, sort_keys=True, separators=(",", ":")), encoding="utf-8"
    )


def load_graph(path: str | Path) -> RoutingGraph:
    """Read a graph cache written by :func:`save_graph`."""
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read graph cache {path}: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("format") != GRAPH_CACHE_FORMAT:
        raise ValueError(f"{path}: not an agewalk graph cache")
    if payload.get("version") != GRAPH_CACHE_VERSION:
        raise ValueError(
            f"{path}: unsupported graph cache version {payload.get('version')!r}"
        )
    cfg = payload["config"]
    config = BuildConfig(
        walkable_highway_values=frozenset(cfg["walkable_highway_values"]),
        walking_speed_mps=cfg["walking_speed_mps"],
        max_grade_clamp=cfg["max_grade_clamp"],
    )
    vertices = tuple(
        Vertex(i, osm_id, LatLon(lat, lon), elev)
        for i, (osm_id, lat, lon, elev) in enumerate(payload["vertices"])
    )
    edges = tuple(
        Edge(
            u,
            v,
            way_id,
            length,
            grade,
            unknown,
            {kind: frozenset(ids) for kind, ids in sets.items()},
            highway,
            way_length,
        )
        for u, v, way_id, length, grade, unknown, highway, way_length, sets in payload["edges"]
    )
    adjacency: list[list[int]] = [[] for _ in vertices]
    for i, edge in enumerate(edges):
        adjacency[edge.u].append(i)
    return RoutingGraph(
        vertices=vertices,
        edges=edges,
        adjacency=tuple(tuple(a) for a in adjacency),
        config=config,
        metadata=payload.get("metadata", {}),
    )
