import json

import pytest
from click.testing import CliRunner

import fixture_city as fc
from agewalk.cli import main
from agewalk.osmio import parse_osm


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    """Run enrich -> project -> build once over the fixture city."""
    directory = tmp_path_factory.mktemp("pipeline")
    paths = fc.write_inputs(directory)
    runner = CliRunner()
    enriched = str(directory / "enriched.osm")
    witnesses = str(directory / "witnesses.csv")
    graph = str(directory / "graph.json")

    r = runner.invoke(main, ["enrich", "--osm", paths["osm"], "--csv", paths["csv"], "--out", enriched])
    assert r.exit_code == 0, r.output
    r = runner.invoke(main, ["project", "--osm", enriched, "--max-distance", "20", "--out", witnesses, "--witnesses"])
    assert r.exit_code == 0, r.output
    r = runner.invoke(main, ["build", "--osm", enriched, "--correlations", witnesses, "--dem", paths["dem"], "--out", graph])
    assert r.exit_code == 0, r.output
    return {
        **paths,
        "dir": directory,
        "enriched": enriched,
        "witnesses": witnesses,
        "graph": graph,
        "runner": runner,
    }


def test_enrich_report(pipeline):
    runner = pipeline["runner"]
    out = str(pipeline["dir"] / "enriched2.osm")
    r = runner.invoke(main, ["enrich", "--osm", pipeline["osm"], "--csv", pipeline["csv"], "--out", out])
    assert r.exit_code == 0
    report = json.loads(r.output.strip().splitlines()[-1])
    assert report["added_count"] == 80
    assert report["per_kind_counts"]["handrail"] == 20


def test_enrich_node_cardinality(pipeline):
    original = parse_osm(open(pipeline["osm"], "rb").read())
    enriched = parse_osm(open(pipeline["enriched"], "rb").read())
    assert len(enriched.nodes) == len(original.nodes) + 80


def test_enrich_missing_file(pipeline):
    r = pipeline["runner"].invoke(
        main, ["enrich", "--osm", "/nonexistent.osm", "--csv", pipeline["csv"], "--out", "/tmp/x.osm"]
    )
    assert r.exit_code == 1
    assert "no such file" in r.output


def test_double_enrichment_guard(pipeline):
    out = str(pipeline["dir"] / "double.osm")
    r = pipeline["runner"].invoke(
        main, ["enrich", "--osm", pipeline["enriched"], "--csv", pipeline["csv"], "--out", out]
    )
    assert r.exit_code == 1
    assert "already enriched" in r.output


def test_project_stats_json(pipeline):
    runner = pipeline["runner"]
    out = str(pipeline["dir"] / "counts.csv")
    r = runner.invoke(main, ["project", "--osm", pipeline["enriched"], "--out", out])
    assert r.exit_code == 0
    stats = json.loads(r.output.strip().splitlines()[-1])
    assert stats["amenities"] == 80
    assert stats["correlations"] > 0
    assert stats["pairs_tested"] <= stats["ways"] * stats["amenities"]


def test_project_negative_distance(pipeline):
    r = pipeline["runner"].invoke(
        main,
        ["project", "--osm", pipeline["enriched"], "--max-distance", "-5", "--out", "/tmp/x.csv"],
    )
    assert r.exit_code == 1


def test_project_from_csv_equals_from_osm(pipeline):
    runner = pipeline["runner"]
    from_osm = pipeline["dir"] / "w_osm.csv"
    from_csv = pipeline["dir"] / "w_csv.csv"
    r1 = runner.invoke(main, ["project", "--osm", pipeline["enriched"], "--out", str(from_osm), "--witnesses"])
    r2 = runner.invoke(
        main,
        ["project", "--osm", pipeline["enriched"], "--csv", pipeline["csv"], "--out", str(from_csv), "--witnesses"],
    )
    assert r1.exit_code == 0 and r2.exit_code == 0
    assert from_osm.read_bytes() == from_csv.read_bytes()


def test_build_without_dem_flags_grades(pipeline):
    runner = pipeline["runner"]
    out = str(pipeline["dir"] / "flat_graph.json")
    r = runner.invoke(
        main,
        ["build", "--osm", pipeline["enriched"], "--correlations", pipeline["witnesses"], "--out", out],
    )
    assert r.exit_code == 0
    from agewalk.graph import load_graph

    graph = load_graph(out)
    assert all(e.grade_unknown for e in graph.edges)


def test_build_corrupt_cache_read(pipeline):
    bad = pipeline["dir"] / "bad_cache.json"
    bad.write_text("{}")
    r = pipeline["runner"].invoke(
        main,
        ["plan", "--graph", str(bad), "--from", "43.45,-3.85", "--to", "43.46,-3.84", "--weights", "25,25,25,25"],
    )
    assert r.exit_code == 1


def test_plan_outputs_json(pipeline):
    origin, destination = fc.origin_destination()
    r = pipeline["runner"].invoke(
        main,
        [
            "plan",
            "--graph", pipeline["graph"],
            "--from", f"{origin.lat},{origin.lon}",
            "--to", f"{destination.lat},{destination.lon}",
            "--weights", "25,25,25,25",
        ],
    )
    assert r.exit_code == 0, r.output
    body = json.loads(r.output.strip())
    assert body["no_route"] is False
    assert len(body["geometry"]["coordinates"]) >= 2


def test_plan_bad_weights(pipeline):
    r = pipeline["runner"].invoke(
        main,
        ["plan", "--graph", pipeline["graph"], "--from", "43.45,-3.85", "--to", "43.46,-3.84", "--weights", "30,30,30,30"],
    )
    assert r.exit_code == 1
    assert "weights sum to 120" in r.output


def test_cli_plan_matches_http_plan(pipeline):
    from fastapi.testclient import TestClient

    from agewalk.graph import load_graph
    from agewalk.service import create_app

    origin, destination = fc.origin_destination()
    r = pipeline["runner"].invoke(
        main,
        [
            "plan",
            "--graph", pipeline["graph"],
            "--from", f"{origin.lat},{origin.lon}",
            "--to", f"{destination.lat},{destination.lon}",
            "--weights", "14,72,12,2",
        ],
    )
    assert r.exit_code == 0
    cli_body = r.output.strip().splitlines()[-1]

    client = TestClient(create_app(load_graph(pipeline["graph"])))
    http = client.get(
        "/plan",
        params={
            "fromLat": origin.lat,
            "fromLon": origin.lon,
            "toLat": destination.lat,
            "toLon": destination.lon,
            "slope": 14,
            "duration": 72,
            "amenity": 12,
            "comfort": 2,
        },
    )
    assert http.content.decode() == cli_body


def test_commands_idempotent(pipeline):
    runner = pipeline["runner"]
    out1 = pipeline["dir"] / "idem1.csv"
    out2 = pipeline["dir"] / "idem2.csv"
    for out in (out1, out2):
        r = runner.invoke(main, ["project", "--osm", pipeline["enriched"], "--out", str(out), "--witnesses"])
        assert r.exit_code == 0
    assert out1.read_bytes() == out2.read_bytes()
