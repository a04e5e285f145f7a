"""Preference-weighted shortest paths and route metrics.

The four user factors (slope, duration, amenity, comfort) are scalarized into
a generalized-time edge cost:

    t = length / walking_speed
    cost = t * (w_dur + w_slope * s(grade)
                + w_amen / (1 + rho_amenity)
                + w_comf / (1 + rho_comfort)) + eps * t

where s(g) = min(|g| / 0.10, 3.0) and rho is the per-100m density of distinct
amenity ids on the edge's way. Amenity-rich streets therefore discount cost
without ever making it nonpositive, and eps keeps degenerate all-zero blends
strictly positive so label-settling search stays correct.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .graph import BuildConfig, Edge, RoutingGraph
from .geo import LatLon
from .osmio import AmenityKind, ROUTE_AMENITY_KINDS

COST_EPSILON = 1e-6
GRADE_REFERENCE = 0.10
SLOPE_PENALTY_CAP = 3.0
COST_TIE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PreferenceWeights:
    slope: float
    duration: float
    amenity: float
    comfort: float


@dataclass(frozen=True)
class RouteMetrics:
    duration_s: float
    ascent_m: float
    descent_m: float
    slope_score: float
    amenities: int
    comfortable_elements: int


@dataclass(frozen=True)
class RoutePlan:
    vertex_ids: tuple[int, ...]
    edge_indices: tuple[int, ...]
    geometry: tuple[LatLon, ...]
    metrics: RouteMetrics
    total_cost: float


def normalize_weights(
    slope_pct: float, duration_pct: float, amenity_pct: float, comfort_pct: float
) -> PreferenceWeights:
    """Validate four percentages summing to 100 and scale them to fractions."""
    values = (slope_pct, duration_pct, amenity_pct, comfort_pct)
    for v in values:
        if v < 0:
            raise ValueError(f"negative weight {v:g}")
    total = sum(values)
    if abs(total - 100.0) > 0.01:
        raise ValueError(f"weights sum to {total:g}")
    return PreferenceWeights(
        slope=slope_pct / 100.0,
        duration=duration_pct / 100.0,
        amenity=amenity_pct / 100.0,
        comfort=comfort_pct / 100.0,
    )


def slope_penalty(grade: float) -> float:
    return min(abs(grade) / GRADE_REFERENCE, SLOPE_PENALTY_CAP)


def _density_per_100m(edge: Edge, kinds) -> float:
    n = sum(len(edge.amenity_ids.get(kind.value, ())) for kind in kinds)
    if n == 0 or edge.way_length_m <= 0:
        return 0.0
    return n * 100.0 / edge.way_length_m


def edge_cost(edge: Edge, weights: PreferenceWeights, config: BuildConfig) -> float:
    """Generalized-time cost of traversing one edge; always > 0 and finite."""
    t = edge.length_m / config.walking_speed_mps
    rho_a = _density_per_100m(edge, ROUTE_AMENITY_KINDS)
    rho_c = _density_per_100m(edge, (AmenityKind.HANDRAIL,))
    blend = (
        weights.duration
        + weights.slope * slope_penalty(edge.grade)
        + weights.amenity / (1.0 + rho_a)
        + weights.comfort / (1.0 + rho_c)
    )
    return t * blend + COST_EPSILON * t


def shortest_path(
    graph: RoutingGraph, src: int, dst: int, weights: PreferenceWeights
) -> RoutePlan | None:
    """Minimum generalized-cost path from src to dst, or None if unreachable.

    Among paths whose costs tie within 1e-9, the lexicographically smallest
    vertex-id sequence is returned.
    """
    n = len(graph.vertices)
    if not (0 <= src < n and 0 <= dst < n):
        raise ValueError(f"vertex out of range (src={src}, dst={dst}, n={n})")
    if src == dst:
        pos = graph.vertices[src].pos
        metrics = RouteMetrics(0.0, 0.0, 0.0, 0.0, 0, 0)
        return RoutePlan((src,), (), (pos,), metrics, 0.0)

    costs = [edge_cost(e, weights, graph.config) for e in graph.edges]

    # Reverse Dijkstra: cost-to-destination labels for every vertex.
    incoming: list[list[int]] = [[] for _ in range(n)]
    for i, edge in enumerate(graph.edges):
        incoming[edge.v].append(i)
    dist = [float("inf")] * n
    dist[dst] = 0.0
    heap = [(0.0, dst)]
    while heap:
        d, v = heapq.heappop(heap)
        if d > dist[v]:
            continue
        for i in incoming[v]:
            u = graph.edges[i].u
            nd = d + costs[i]
            if nd < dist[u]:
                dist[u] = nd
                heapq.heappush(heap, (nd, u))

    if dist[src] == float("inf"):
        return None

    # Greedy forward walk: at each vertex take the edge minimizing
    # cost + remaining distance; among near-ties prefer the smallest next
    # vertex id so tie-broken paths are lexicographically minimal.
    vertex_ids = [src]
    edge_indices: list[int] = []
    u = src
    total = 0.0
    for _ in range(len(graph.edges) + 1):
        if u == dst:
            break
        best = float("inf")
        for i in graph.adjacency[u]:
            best = min(best, costs[i] + dist[graph.edges[i].v])
        choice = None
        choice_key = None
        for i in graph.adjacency[u]:
            if costs[i] + dist[graph.edges[i].v] <= best + COST_TIE_TOLERANCE:
                key = (graph.edges[i].v, i)
                if choice_key is None or key < choice_key:
                    choice_key = key
                    choice = i
        if choice is None:  # pragma: no cover - dist[src] finite implies progress
            return None
        edge_indices.append(choice)
        total += costs[choice]
        u = graph.edges[choice].v
        vertex_ids.append(u)
    else:  # pragma: no cover - tolerance slack produced a cycle
        raise RuntimeError("path reconstruction did not terminate")

    geometry = tuple(graph.vertices[v].pos for v in vertex_ids)
    plan = RoutePlan(
        tuple(vertex_ids),
        tuple(edge_indices),
        geometry,
        RouteMetrics(0.0, 0.0, 0.0, 0.0, 0, 0),
        total,
    )
    return RoutePlan(
        plan.vertex_ids,
        plan.edge_indices,
        plan.geometry,
        route_metrics(plan, graph),
        total,
    )


def route_metrics(plan: RoutePlan, graph: RoutingGraph) -> RouteMetrics:
    """Aggregate the route information reported to the user.

    Amenity and comfort counts are distinct amenity ids over all traversed
    ways: an amenity near two traversed ways, or a way walked twice, still
    counts once.
    """
    duration = 0.0
    ascent = 0.0
    descent = 0.0
    slope_score = 0.0
    amenity_ids: set[str] = set()
    handrail_ids: set[str] = set()
    speed = graph.config.walking_speed_mps
    for i in plan.edge_indices:
        edge = graph.edges[i]
        t = edge.length_m / speed
        duration += t
        slope_score += t * slope_penalty(edge.grade)
        if not edge.grade_unknown:
            eu = graph.vertices[edge.u].elevation
            ev = graph.vertices[edge.v].elevation
            if eu is not None and ev is not None:
                delta = ev - eu
                if delta > 0:
                    ascent += delta
                else:
                    descent += -delta
        for kind in ROUTE_AMENITY_KINDS:
            amenity_ids.update(edge.amenity_ids.get(kind.value, ()))
        handrail_ids.update(edge.amenity_ids.get(AmenityKind.HANDRAIL.value, ()))
    return RouteMetrics(
        duration_s=duration,
        ascent_m=ascent,
        descent_m=descent,
        slope_score=slope_score,
        amenities=len(amenity_ids),
        comfortable_elements=len(handrail_ids),
    )
