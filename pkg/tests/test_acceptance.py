"""End-to-end acceptance suite.

Each test covers one release criterion at its pinned tolerance and prints a
PASS/FAIL line (visible with `pytest -s tests/test_acceptance.py`).
"""

import json
import math
import random
import time

import pytest
from click.testing import CliRunner

import fixture_city as fc
import graphgen
from agewalk import apt, elevation, soet
from agewalk.cli import main as cli_main
from agewalk.geo import LatLon, PlanarPoint, project_point_to_segment
from agewalk.graph import build_graph, load_graph, nearest_vertex
from agewalk.osmio import Amenity, AmenityKind, OsmDocument, OsmNode, OsmWay, parse_osm
from agewalk.router import COST_EPSILON, normalize_weights, shortest_path
from oracles import enumerate_best_path, naive_correlations, sampled_segment_distance
from test_router import _factor_aggregate, raise_factor

BASE = LatLon(43.4600, -3.8100)
M_PER_DEG_LAT = 111_194.93


def report(number: int, name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[{status}] criterion {number}: {name}{suffix}")
    assert ok, f"criterion {number} failed: {name}{suffix}"


def _offset(p: LatLon, north_m: float, east_m: float) -> LatLon:
    return LatLon(
        p.lat + north_m / M_PER_DEG_LAT,
        p.lon + east_m / (M_PER_DEG_LAT * math.cos(math.radians(p.lat))),
    )


def _random_instance(rng: random.Random, n_ways: int, n_amenities: int, span_m: float):
    nodes = {}
    ways = {}
    next_node = 1
    for way_id in range(1, n_ways + 1):
        start = _offset(BASE, rng.uniform(0, span_m), rng.uniform(0, span_m))
        pts = [start]
        for _ in range(rng.randint(1, 4)):
            pts.append(_offset(pts[-1], rng.uniform(-120, 120), rng.uniform(-120, 120)))
        refs = []
        for p in pts:
            nodes[next_node] = OsmNode(next_node, p)
            refs.append(next_node)
            next_node += 1
        ways[way_id] = OsmWay(way_id, tuple(refs), {"highway": "footway"})
    kinds = list(AmenityKind)
    amenities = [
        Amenity(
            f"a{i:04d}",
            rng.choice(kinds),
            _offset(BASE, rng.uniform(0, span_m), rng.uniform(0, span_m)),
            None,
        )
        for i in range(n_amenities)
    ]
    return OsmDocument(nodes=nodes, ways=ways), amenities


def test_criterion_1_apt_oracle_equivalence():
    rng = random.Random(20240601)
    start = time.monotonic()
    ok = True
    detail = ""
    for trial in range(50):
        n_ways = rng.randint(20, 200)
        n_amenities = rng.randint(50, 500)
        max_d = rng.choice([5.0, 20.0, 50.0])
        doc, amenities = _random_instance(rng, n_ways, n_amenities, 2000.0)
        got = apt.correlate(doc, amenities, max_d)
        expected = naive_correlations(doc, amenities, max_d)
        if {(c.way_id, c.amenity_id) for c in got} != {(w, a) for w, a, _ in expected}:
            ok, detail = False, f"trial {trial}: pair sets differ"
            break
        by_pair = {(w, a): d for w, a, d in expected}
        if any(
            abs(c.distance_m - by_pair[(c.way_id, c.amenity_id)]) > 1e-6 for c in got
        ):
            ok, detail = False, f"trial {trial}: distance mismatch"
            break
    elapsed = time.monotonic() - start
    if ok and elapsed >= 60.0:
        ok, detail = False, f"runtime {elapsed:.1f}s"
    report(1, "APT oracle equivalence", ok, detail or f"50 instances in {elapsed:.1f}s")


def test_criterion_2_prefilter_effectiveness():
    rng = random.Random(20240602)
    doc, _ = _random_instance(rng, 150, 0, 2000.0)
    # amenities concentrated in 1% of the 2 km x 2 km map area
    amenities = [
        Amenity(
            f"c{i:03d}",
            AmenityKind.BENCH,
            _offset(BASE, rng.uniform(0, 200), rng.uniform(0, 200)),
            None,
        )
        for i in range(400)
    ]
    got, stats = apt.correlate_with_stats(doc, amenities, 20.0)
    expected = naive_correlations(doc, amenities, 20.0)
    same = {(c.way_id, c.amenity_id) for c in got} == {(w, a) for w, a, _ in expected}
    budget = 0.10 * stats.ways * stats.amenities
    report(
        2,
        "APT prefilter effectiveness",
        same and stats.pairs_tested <= budget,
        f"{stats.pairs_tested} exact tests vs budget {budget:.0f}",
    )


def test_criterion_3_projection_correctness():
    rng = random.Random(20240603)
    failures = 0
    clamp_low = clamp_high = 0
    for _ in range(1000):
        p = PlanarPoint(rng.uniform(0, 1), rng.uniform(0, 1))
        a = PlanarPoint(rng.uniform(0, 1), rng.uniform(0, 1))
        b = PlanarPoint(rng.uniform(0, 1), rng.uniform(0, 1))
        proj = project_point_to_segment(p, a, b)
        if abs(proj.distance_m - sampled_segment_distance(p, a, b)) > 1e-6:
            failures += 1
        if proj.t == 0.0:
            clamp_low += 1
        if proj.t == 1.0:
            clamp_high += 1
    report(
        3,
        "projection correctness",
        failures == 0 and clamp_low > 0 and clamp_high > 0,
        f"{failures} failures, clamps t=0:{clamp_low} t=1:{clamp_high}",
    )


def test_criterion_4_router_optimality():
    rng = random.Random(20240604)
    failures = 0
    for _ in range(200):
        graph = graphgen.random_graph(rng)
        weights = graphgen.random_weights(rng)
        n = len(graph.vertices)
        src, dst = rng.randrange(n), rng.randrange(n)
        plan = shortest_path(graph, src, dst, weights)
        best = enumerate_best_path(graph, src, dst, weights)
        if plan is None:
            if best != float("inf"):
                failures += 1
        elif abs(plan.total_cost - best) > 1e-9:
            failures += 1
    report(4, "router optimality vs enumeration", failures == 0, f"{failures} failures")


def test_criterion_5_scalarization_monotonicity():
    rng = random.Random(20240605)
    violations = 0
    for factor in ("slope", "duration", "amenity", "comfort"):
        for _ in range(100):
            graph = graphgen.random_graph(rng)
            base = graphgen.random_weights(rng)
            raised = raise_factor(base, factor, rng.uniform(0.2, 0.8))
            src, dst = 0, len(graph.vertices) - 1
            p_base = shortest_path(graph, src, dst, base)
            p_raised = shortest_path(graph, src, dst, raised)
            if p_base is None or p_raised is None:
                continue
            agg_base = _factor_aggregate(graph, p_base, factor)
            agg_raised = _factor_aggregate(graph, p_raised, factor)
            old, new = getattr(base, factor), getattr(raised, factor)
            lam = (1.0 - new) / (1.0 - old)
            alpha = new - lam * old
            beta = (1.0 - lam) * COST_EPSILON
            slack = (beta / alpha) * max(
                0.0,
                _factor_aggregate(graph, p_base, "duration")
                - _factor_aggregate(graph, p_raised, "duration"),
            )
            if agg_raised > agg_base + slack + 1e-9:
                violations += 1
    report(5, "scalarization monotonicity", violations == 0, f"{violations} violations")


@pytest.fixture(scope="module")
def fixture_graph():
    doc = fc.build_document()
    amenities = fc.build_amenities()
    enriched, _ = soet.enrich(doc, amenities)
    cors = apt.correlate(enriched, amenities, 20.0)
    elevations, _ = elevation.assign_elevations(enriched, fc.build_raster())
    return build_graph(enriched, cors, elevations)


def test_criterion_6_table_pattern(fixture_graph):
    graph = fixture_graph
    origin, destination = fc.origin_destination()
    src, dst = nearest_vertex(graph, origin), nearest_vertex(graph, destination)
    metrics = {}
    for name, pcts in fc.PROFILES.items():
        plan = shortest_path(graph, src, dst, normalize_weights(*pcts))
        assert plan is not None
        metrics[name] = plan.metrics
    ok = (
        metrics["duration"].duration_s <= min(m.duration_s for m in metrics.values())
        and metrics["slope"].slope_score <= min(m.slope_score for m in metrics.values())
        and metrics["amenity"].amenities >= max(m.amenities for m in metrics.values())
        and metrics["comfort"].comfortable_elements
        >= max(m.comfortable_elements for m in metrics.values())
    )
    detail = "; ".join(
        f"{n}: dur={m.duration_s:.0f}s slope={m.slope_score:.0f} amen={m.amenities} comf={m.comfortable_elements}"
        for n, m in metrics.items()
    )
    report(6, "diagonal dominance of the four weight profiles", ok, detail)


def _run_pipeline(directory):
    """enrich -> project -> build -> plan via the CLI; returns artifact bytes."""
    paths = fc.write_inputs(directory)
    runner = CliRunner()
    enriched = directory / "enriched.osm"
    witnesses = directory / "witnesses.csv"
    graph_path = directory / "graph.json"
    for args in (
        ["enrich", "--osm", paths["osm"], "--csv", paths["csv"], "--out", str(enriched)],
        ["project", "--osm", str(enriched), "--max-distance", "20", "--out", str(witnesses), "--witnesses"],
        ["build", "--osm", str(enriched), "--correlations", str(witnesses), "--dem", paths["dem"], "--out", str(graph_path)],
    ):
        r = runner.invoke(cli_main, args)
        assert r.exit_code == 0, r.output
    origin, destination = fc.origin_destination()
    r = runner.invoke(
        cli_main,
        [
            "plan",
            "--graph", str(graph_path),
            "--from", f"{origin.lat},{origin.lon}",
            "--to", f"{destination.lat},{destination.lon}",
            "--weights", "25,25,25,25",
        ],
    )
    assert r.exit_code == 0, r.output
    return {
        "paths": paths,
        "enriched": enriched.read_bytes(),
        "witnesses": witnesses.read_bytes(),
        "graph": graph_path.read_bytes(),
        "plan": r.output.strip().splitlines()[-1],
    }


def test_criterion_7_pipeline_round_trip(tmp_path):
    run_dir = tmp_path / "run"
    run_dir.mkdir()
    start = time.monotonic()
    artifacts = _run_pipeline(run_dir)
    elapsed = time.monotonic() - start

    original = parse_osm(open(artifacts["paths"]["osm"], "rb").read())
    enriched = parse_osm(artifacts["enriched"])
    amenity_count = 80
    nodes_ok = len(enriched.nodes) == len(original.nodes) + amenity_count

    # APT from provenance-tagged nodes vs the raw CSV file must agree
    from agewalk.osmio import parse_amenity_csv

    amenities_csv = parse_amenity_csv(open(artifacts["paths"]["csv"], "rb").read())
    cors_osm = apt.correlate(enriched, soet.extract_amenities(enriched), 20.0)
    cors_csv = apt.correlate(enriched, amenities_csv, 20.0)
    apt_ok = cors_osm == cors_csv

    plan_body = json.loads(artifacts["plan"])
    plan_ok = plan_body["no_route"] is False and len(plan_body["geometry"]["coordinates"]) >= 2
    report(
        7,
        "pipeline round-trip",
        elapsed < 30.0 and nodes_ok and apt_ok and plan_ok,
        f"{elapsed:.1f}s, nodes_ok={nodes_ok}, apt_sources_agree={apt_ok}",
    )


def test_criterion_8_elevation_sampling():
    rng = random.Random(20240608)
    a, b = 150.0, -60.0
    ncols, nrows = 10, 9
    xll, yll, cs = -3.95, 43.38, 0.008
    values = []
    for r in range(nrows):
        lat = yll + (nrows - r - 0.5) * cs
        for c in range(ncols):
            lon = xll + (c + 0.5) * cs
            values.append(a * lat + b * lon)
    raster = elevation.ElevationRaster(ncols, nrows, xll, yll, cs, -9999.0, tuple(values))

    failures = 0
    for _ in range(1000):
        p = LatLon(
            yll + rng.uniform(0.5 * cs, (nrows - 0.5) * cs),
            xll + rng.uniform(0.5 * cs, (ncols - 0.5) * cs),
        )
        got = elevation.sample(raster, p)
        if got is None or abs(got - (a * p.lat + b * p.lon)) > 1e-9:
            failures += 1

    # continuity at an interior cell-center boundary
    boundary = xll + 3.5 * cs
    lat = yll + 4.2 * cs
    left = elevation.sample(raster, LatLon(lat, boundary - 1e-9))
    right = elevation.sample(raster, LatLon(lat, boundary + 1e-9))
    continuity_ok = left is not None and right is not None and abs(left - right) < 1e-6

    # nodata propagation
    holed = elevation.ElevationRaster(
        ncols, nrows, xll, yll, cs, -9999.0,
        tuple(-9999.0 if i == 4 * ncols + 4 else v for i, v in enumerate(values)),
    )
    hole_lat = yll + (nrows - 4 - 0.5) * cs
    hole_lon = xll + 4.5 * cs
    nodata_ok = elevation.sample(holed, LatLon(hole_lat + 0.3 * cs, hole_lon + 0.3 * cs)) is None

    report(
        8,
        "elevation sampling",
        failures == 0 and continuity_ok and nodata_ok,
        f"{failures} failures, continuity={continuity_ok}, nodata={nodata_ok}",
    )


def test_criterion_9_determinism(tmp_path):
    run1 = tmp_path / "run1"
    run2 = tmp_path / "run2"
    run1.mkdir()
    run2.mkdir()
    a = _run_pipeline(run1)
    b = _run_pipeline(run2)
    same = (
        a["graph"] == b["graph"]
        and a["witnesses"] == b["witnesses"]
        and a["plan"] == b["plan"]
        and a["enriched"] == b["enriched"]
    )
    report(9, "full-pipeline determinism", same)


def test_plan_json_reloads_identically(tmp_path, fixture_graph):
    """The cache round-trips the graph the service actually plans on."""
    path = tmp_path / "graph.json"
    from agewalk.graph import save_graph

    save_graph(fixture_graph, path)
    assert load_graph(path) == fixture_graph
