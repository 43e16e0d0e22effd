"""End-to-end CLI runs against the committed fixture data.

The strong property checked here is byte identity: every command run on
the same inputs writes files identical to the committed artifacts.
"""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from sidewalk_access.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"
GOLDEN = DATA / "golden"


@pytest.fixture()
def runner():
    # click >= 8.2 separates stderr by default
    return CliRunner()


def run_ok(runner, args):
    result = runner.invoke(main, args, catch_exceptions=False)
    assert result.exit_code == 0, result.stderr or result.output
    return result


def run_fail(runner, args):
    result = runner.invoke(main, args)
    assert result.exit_code == 1
    rec = json.loads(result.stderr.strip().splitlines()[-1])
    assert {"module", "kind", "message"} <= set(rec)
    return rec


def test_version(runner):
    result = run_ok(runner, ["--version"])
    assert "sidewalk-access" in result.output


def test_analyze_reproduces_committed_artifacts(runner, tmp_path):
    out_p = tmp_path / "profiles.json"
    out_r = tmp_path / "report.json"
    run_ok(runner, [
        "analyze", "--survey", str(DATA / "survey.json"),
        "--out-profiles", str(out_p), "--out-report", str(out_r),
    ])
    assert out_p.read_bytes() == (DATA / "profiles.json").read_bytes()
    assert out_r.read_bytes() == (DATA / "report.json").read_bytes()


def test_graph_reproduces_committed_artifact(runner, tmp_path):
    out = tmp_path / "graph.json"
    run_ok(runner, [
        "graph", "--sidewalks", str(DATA / "sidewalks.geojson"),
        "--labels", str(DATA / "labels.json"), "--out", str(out),
    ])
    assert out.read_bytes() == (DATA / "graph.json").read_bytes()


def test_score_segment_golden(runner, tmp_path):
    out = tmp_path / "scores.json"
    run_ok(runner, [
        "score", "--graph", str(DATA / "graph.json"),
        "--profiles", str(DATA / "profiles.json"),
        "--profile-id", "walking_cane", "--level", "segment",
        "--out", str(out),
    ])
    assert out.read_bytes() == (GOLDEN / "scores_segment_walking_cane.json").read_bytes()


def test_score_neighborhood_golden(runner, tmp_path):
    out = tmp_path / "scores.json"
    run_ok(runner, [
        "score", "--graph", str(DATA / "graph.json"),
        "--profiles", str(DATA / "profiles.json"),
        "--profile-id", "motorized_wheelchair", "--level", "neighborhood",
        "--neighborhoods", str(DATA / "neighborhoods.geojson"),
        "--out", str(out),
    ])
    expect = GOLDEN / "scores_neighborhood_motorized_wheelchair.json"
    assert out.read_bytes() == expect.read_bytes()


def test_route_compare_golden(runner, tmp_path, scenario):
    out = tmp_path / "routes.json"
    o = scenario["origin"]
    d = scenario["dest"]
    run_ok(runner, [
        "route", "--graph", str(DATA / "graph.json"),
        "--profiles", str(DATA / "profiles.json"),
        "--profile-id", "walking_cane",
        "--profile-id", "motorized_wheelchair",
        "--from", f"{o['lat']},{o['lon']}", "--to", f"{d['lat']},{d['lon']}",
        "--out", str(out),
    ])
    assert out.read_bytes() == (GOLDEN / "routes_planted.json").read_bytes()


def test_route_single_profile_and_shortest(runner, tmp_path, scenario):
    out = tmp_path / "route.json"
    o = scenario["origin"]
    d = scenario["dest"]
    run_ok(runner, [
        "route", "--graph", str(DATA / "graph.json"),
        "--profiles", str(DATA / "profiles.json"),
        "--profile-id", "shortest",
        "--from", f"{o['lat']},{o['lon']}", "--to", f"{d['lat']},{d['lon']}",
        "--out", str(out),
    ])
    doc = json.loads(out.read_text())
    (feat,) = doc["features"]
    assert feat["properties"]["profile_id"] == "shortest"
    assert feat["properties"]["length_m"] == feat["properties"]["weighted_m"]


def test_route_dijkstra_matches_astar(runner, tmp_path, scenario):
    o = scenario["origin"]
    d = scenario["dest"]
    outs = []
    for alg in ("astar", "dijkstra"):
        out = tmp_path / f"route_{alg}.json"
        run_ok(runner, [
            "route", "--graph", str(DATA / "graph.json"),
            "--profiles", str(DATA / "profiles.json"),
            "--profile-id", "manual_wheelchair",
            "--from", f"{o['lat']},{o['lon']}",
            "--to", f"{d['lat']},{d['lon']}",
            "--algorithm", alg, "--out", str(out),
        ])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_analyze_byte_stable_across_runs(runner, tmp_path):
    outs = []
    for tag in ("one", "two"):
        out_p = tmp_path / f"profiles_{tag}.json"
        out_r = tmp_path / f"report_{tag}.json"
        run_ok(runner, [
            "analyze", "--survey", str(DATA / "survey.json"),
            "--out-profiles", str(out_p), "--out-report", str(out_r),
        ])
        outs.append(out_p.read_bytes() + out_r.read_bytes())
    assert outs[0] == outs[1]


# ------------------------------------------------------------ error paths


def test_missing_file_is_io_record(runner, tmp_path):
    rec = run_fail(runner, [
        "analyze", "--survey", str(tmp_path / "nope.json"),
        "--out-profiles", str(tmp_path / "p.json"),
        "--out-report", str(tmp_path / "r.json"),
    ])
    assert rec["module"] == "cli"
    assert rec["kind"] == "io"
    assert "nope.json" in rec["message"]


def test_unknown_profile_record(runner, tmp_path, scenario):
    o = scenario["origin"]
    d = scenario["dest"]
    rec = run_fail(runner, [
        "route", "--graph", str(DATA / "graph.json"),
        "--profiles", str(DATA / "profiles.json"),
        "--profile-id", "jetpack",
        "--from", f"{o['lat']},{o['lon']}", "--to", f"{d['lat']},{d['lon']}",
        "--out", str(tmp_path / "r.json"),
    ])
    assert rec["module"] == "profiles"
    assert rec["kind"] == "unknown_profile"
    assert "jetpack" in rec["message"]


def test_malformed_coordinates_record(runner, tmp_path):
    rec = run_fail(runner, [
        "route", "--graph", str(DATA / "graph.json"),
        "--profiles", str(DATA / "profiles.json"),
        "--profile-id", "walker",
        "--from", "not-a-point", "--to", "47.66,-122.31",
        "--out", str(tmp_path / "r.json"),
    ])
    assert rec["module"] == "interface"
    assert rec["kind"] == "bad_request"


def test_out_of_range_latitude_record(runner, tmp_path):
    rec = run_fail(runner, [
        "route", "--graph", str(DATA / "graph.json"),
        "--profiles", str(DATA / "profiles.json"),
        "--profile-id", "walker",
        "--from", "95.0,-122.31", "--to", "47.66,-122.31",
        "--out", str(tmp_path / "r.json"),
    ])
    assert rec["kind"] == "bad_request"
    assert "out of range" in rec["message"]


def test_unsnappable_endpoint_record(runner, tmp_path, scenario):
    p = scenario["unsnappable_point"]
    d = scenario["dest"]
    rec = run_fail(runner, [
        "route", "--graph", str(DATA / "graph.json"),
        "--profiles", str(DATA / "profiles.json"),
        "--profile-id", "walker",
        "--from", f"{p['lat']},{p['lon']}", "--to", f"{d['lat']},{d['lon']}",
        "--out", str(tmp_path / "r.json"),
    ])
    assert rec["module"] == "routing"
    assert rec["kind"] == "unsnappable"
    assert "origin" in rec["message"]


def test_disconnected_components_record(runner, tmp_path, scenario):
    p = scenario["disconnected_point"]
    d = scenario["dest"]
    rec = run_fail(runner, [
        "route", "--graph", str(DATA / "graph.json"),
        "--profiles", str(DATA / "profiles.json"),
        "--profile-id", "walker",
        "--from", f"{p['lat']},{p['lon']}", "--to", f"{d['lat']},{d['lon']}",
        "--out", str(tmp_path / "r.json"),
    ])
    assert rec["module"] == "routing"
    assert rec["kind"] == "disconnected"
    assert "component" in rec["message"]


def test_neighborhood_level_requires_file(runner, tmp_path):
    rec = run_fail(runner, [
        "score", "--graph", str(DATA / "graph.json"),
        "--profiles", str(DATA / "profiles.json"),
        "--profile-id", "walker", "--level", "neighborhood",
        "--out", str(tmp_path / "s.json"),
    ])
    assert rec["kind"] == "bad_request"
    assert "--neighborhoods" in rec["message"]


def test_invalid_survey_record(runner, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"images": []}', encoding="utf-8")
    rec = run_fail(runner, [
        "analyze", "--survey", str(bad),
        "--out-profiles", str(tmp_path / "p.json"),
        "--out-report", str(tmp_path / "r.json"),
    ])
    assert rec["module"] == "survey"
    assert "path" in rec
