"""Shared plan-request handling and deterministic JSON rendering.

The CLI `plan` command and the HTTP `/plan` endpoint both go through
:func:`plan_request`, so identical inputs produce byte-identical JSON bodies:
field order is fixed, meter/second metrics use 2 decimals, coordinates use 7
decimals and weights 4.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .geo import LatLon
from .graph import RoutingGraph, nearest_vertex
from .router import PreferenceWeights, RouteMetrics, normalize_weights, shortest_path


@dataclass(frozen=True)
class PlanRequest:
    origin: LatLon
    destination: LatLon
    slope_pct: float
    duration_pct: float
    amenity_pct: float
    comfort_pct: float


@dataclass(frozen=True)
class PlanOutcome:
    status: int
    body: str  # JSON, single line


def _round7(x: float) -> float:
    return round(x, 7)


def _weights_doc(weights: PreferenceWeights) -> dict:
    return {
        "slope": round(weights.slope, 4),
        "duration": round(weights.duration, 4),
        "amenity": round(weights.amenity, 4),
        "comfort": round(weights.comfort, 4),
    }


def _metrics_doc(metrics: RouteMetrics) -> dict:
    return {
        "duration_s": round(metrics.duration_s, 2),
        "ascent_m": round(metrics.ascent_m, 2),
        "descent_m": round(metrics.descent_m, 2),
        "slope_score": round(metrics.slope_score, 2),
        "amenities": metrics.amenities,
        "comfortable_elements": metrics.comfortable_elements,
    }


def _dumps(doc: dict) -> str:
    return json.dumps(doc, separators=(",", ":"))


def error_body(message: str) -> str:
    return _dumps({"error": message})


def plan_request(graph: RoutingGraph | None, req: PlanRequest) -> PlanOutcome:
    """Resolve a plan request to an HTTP-style status and JSON body."""
    if graph is None:
        return PlanOutcome(503, error_body("graph not loaded"))
    try:
        weights = normalize_weights(
            req.slope_pct, req.duration_pct, req.amenity_pct, req.comfort_pct
        )
    except ValueError as exc:
        return PlanOutcome(400, error_body(str(exc)))

    src = nearest_vertex(graph, req.origin)
    dst = nearest_vertex(graph, req.destination)
    plan = shortest_path(graph, src, dst, weights)
    if plan is None:
        body = _dumps(
            {
                "geometry": {"type": "LineString", "coordinates": []},
                "metrics": None,
                "weights": _weights_doc(weights),
                "no_route": True,
            }
        )
        return PlanOutcome(422, body)

    coordinates = [[_round7(p.lon), _round7(p.lat)] for p in plan.geometry]
    body = _dumps(
        {
            "geometry": {"type": "LineString", "coordinates": coordinates},
            "metrics": _metrics_doc(plan.metrics),
            "weights": _weights_doc(weights),
            "no_route": False,
        }
    )
    return PlanOutcome(200, body)
