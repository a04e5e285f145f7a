"""Batch pipeline commands: enrich -> project -> build -> plan/serve."""

from __future__ import annotations

import functools
import json
import os
import sys
from pathlib import Path

import click

from . import apt, elevation, graph as graphmod, soet
from .geo import LatLon
from .osmio import parse_amenity_csv, parse_osm, write_osm
from .planio import PlanRequest, plan_request


def _pipeline_errors(fn):
    """Map input/validation failures to exit 1, anything else to exit 2."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ValueError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
        except Exception as exc:  # noqa: BLE001 - CLI boundary
            click.echo(f"internal error: {exc}", err=True)
            sys.exit(2)

    return wrapper


def _read_bytes(path: str) -> bytes:
    p = Path(path)
    if not p.exists():
        raise OSError(f"no such file: {path}")
    return p.read_bytes()


def _parse_latlon(text: str, label: str) -> LatLon:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"{label}: expected 'lat,lon', got '{text}'")
    try:
        return LatLon(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise ValueError(f"{label}: {exc}") from exc


@click.group()
def main() -> None:
    """Age-friendly pedestrian route planning pipeline."""


@main.command()
@click.option("--osm", "osm_path", required=True, help="Input OSM XML file.")
@click.option("--csv", "csv_path", required=True, help="Amenity CSV file.")
@click.option("--out", "out_path", required=True, help="Enriched OSM output path.")
@_pipeline_errors
def enrich(osm_path: str, csv_path: str, out_path: str) -> None:
    """Merge CSV amenities into an OSM file as new tagged nodes."""
    doc = parse_osm(_read_bytes(osm_path))
    amenities = parse_amenity_csv(_read_bytes(csv_path))
    enriched, report = soet.enrich(doc, amenities)
    Path(out_path).write_bytes(write_osm(enriched))
    click.echo(
        json.dumps(
            {
                "added_count": report.added_count,
                "id_range": list(report.id_range) if report.id_range else None,
                "per_kind_counts": report.per_kind_counts,
            },
            separators=(",", ":"),
        )
    )


@main.command()
@click.option("--osm", "osm_path", required=True, help="Enriched OSM XML file.")
@click.option("--csv", "csv_path", default=None, help="Read amenities from this CSV instead of the OSM provenance tags.")
@click.option("--max-distance", default=apt.DEFAULT_MAX_DISTANCE_M, show_default=True, help="Maximum projection distance in meters.")
@click.option("--out", "out_path", required=True, help="Correlation CSV output path.")
@click.option("--witnesses", is_flag=True, help="Keep per-amenity witness rows instead of counts.")
@_pipeline_errors
def project(osm_path: str, csv_path: str | None, max_distance: float, out_path: str, witnesses: bool) -> None:
    """Correlate ways with nearby amenities and write the correlation CSV."""
    doc = parse_osm(_read_bytes(osm_path))
    if csv_path is not None:
        amenities = parse_amenity_csv(_read_bytes(csv_path))
    else:
        amenities = soet.extract_amenities(doc)
    correlations, stats = apt.correlate_with_stats(doc, amenities, max_distance)
    if witnesses:
        apt.write_correlation_csv(correlations, out_path, mode="witnesses")
    else:
        apt.write_correlation_csv(apt.aggregate_counts(correlations), out_path, mode="counts")
    click.echo(json.dumps(stats.as_dict(), separators=(",", ":")))


@main.command()
@click.option("--osm", "osm_path", required=True, help="Enriched OSM XML file.")
@click.option("--correlations", "correlations_path", required=True, help="Correlation CSV (counts or witnesses).")
@click.option("--dem", "dem_path", default=None, help="ESRI ASCII elevation grid; omit for a flat build with unknown grades.")
@click.option("--out", "out_path", required=True, help="Graph cache output path.")
@click.option("--walking-speed", default=1.33, show_default=True, help="Walking speed in m/s.")
@click.option("--max-grade-clamp", default=1.0, show_default=True, help="Clamp edge grades to +/- this value.")
@_pipeline_errors
def build(
    osm_path: str,
    correlations_path: str,
    dem_path: str | None,
    out_path: str,
    walking_speed: float,
    max_grade_clamp: float,
) -> None:
    """Build and cache the routing graph."""
    doc = parse_osm(_read_bytes(osm_path))
    _, correlation_rows = apt.read_correlation_csv(correlations_path)
    if dem_path is not None:
        raster = elevation.load_ascii_grid(_read_bytes(dem_path))
        elevations, misses = elevation.assign_elevations(doc, raster)
        if misses:
            click.echo(f"warning: {misses} nodes outside elevation coverage", err=True)
    else:
        elevations = {}
    config = graphmod.BuildConfig(
        walking_speed_mps=walking_speed, max_grade_clamp=max_grade_clamp
    )
    graph = graphmod.build_graph(doc, correlation_rows, elevations, config)
    graphmod.save_graph(graph, out_path)
    click.echo(json.dumps(graphmod.graph_stats(graph), separators=(",", ":")))


@main.command()
@click.option("--graph", "graph_path", required=True, help="Graph cache file.")
@click.option("--from", "from_text", required=True, help="Origin as 'lat,lon'.")
@click.option("--to", "to_text", required=True, help="Destination as 'lat,lon'.")
@click.option("--weights", "weights_text", required=True, help="Percentages 'slope,duration,amenity,comfort'.")
@_pipeline_errors
def plan(graph_path: str, from_text: str, to_text: str, weights_text: str) -> None:
    """Compute one route; prints the same JSON the HTTP service returns."""
    graph = graphmod.load_graph(graph_path)
    origin = _parse_latlon(from_text, "--from")
    destination = _parse_latlon(to_text, "--to")
    parts = weights_text.split(",")
    if len(parts) != 4:
        raise ValueError(f"--weights: expected 4 comma-separated values, got '{weights_text}'")
    try:
        pcts = [float(p) for p in parts]
    except ValueError as exc:
        raise ValueError(f"--weights: {exc}") from exc
    outcome = plan_request(graph, PlanRequest(origin, destination, *pcts))
    click.echo(outcome.body)
    if outcome.status != 200:
        sys.exit(1)


@main.command()
@click.option("--graph", "graph_path", required=True, help="Graph cache file.")
@click.option("--port", default=None, type=int, help="Listen port (default: AFRP_PORT or 8080).")
@_pipeline_errors
def serve(graph_path: str, port: int | None) -> None:
    """Run the HTTP planning service until terminated."""
    import uvicorn

    from .service import create_app

    graph = graphmod.load_graph(graph_path)
    if port is None:
        port = int(os.environ.get("AFRP_PORT", "8080"))
    uvicorn.run(create_app(graph), host="0.0.0.0", port=port)


if __name__ == "__main__":
    main()
