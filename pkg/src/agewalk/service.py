"""HTTP facade over a loaded routing graph."""

from __future__ import annotations

import json

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from .geo import LatLon
from .graph import RoutingGraph
from .planio import PlanOutcome, PlanRequest, error_body, plan_request

_PLAN_PARAMS = ("fromLat", "fromLon", "toLat", "toLon", "slope", "duration", "amenity", "comfort")


def create_app(graph: RoutingGraph | None) -> FastAPI:
    """Build the service around one immutable graph snapshot."""
    app = FastAPI(title="agewalk", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def _json(outcome: PlanOutcome) -> Response:
        return Response(
            content=outcome.body, status_code=outcome.status, media_type="application/json"
        )

    @app.get("/health")
    def health() -> Response:
        body = json.dumps(
            {
                "status": "ok",
                "graph_loaded": graph is not None,
                "vertices": len(graph.vertices) if graph else 0,
                "edges": len(graph.edges) if graph else 0,
            },
            separators=(",", ":"),
        )
        return Response(content=body, media_type="application/json")

    @app.get("/plan")
    def plan(request: Request) -> Response:
        params = request.query_params
        missing = [name for name in _PLAN_PARAMS if name not in params]
        if missing:
            return _json(
                PlanOutcome(400, error_body(f"missing parameters: {', '.join(missing)}"))
            )
        try:
            origin = LatLon(float(params["fromLat"]), float(params["fromLon"]))
            destination = LatLon(float(params["toLat"]), float(params["toLon"]))
        except ValueError as exc:
            return _json(PlanOutcome(400, error_body(f"malformed coordinates: {exc}")))
        try:
            weights = [float(params[name]) for name in ("slope", "duration", "amenity", "comfort")]
        except ValueError as exc:
            return _json(PlanOutcome(400, error_body(f"malformed weights: {exc}")))
        req = PlanRequest(origin, destination, *weights)
        return _json(plan_request(graph, req))

    return app
