"""Command line front end.

Each subcommand reads documents from disk, runs one pipeline stage, and
writes canonical JSON back out.  Failures print a single-line
machine-readable record on stderr and exit nonzero so scripts can branch
on ``module``/``kind`` without scraping prose.
"""

from __future__ import annotations

import functools
import json
from pathlib import Path

import click

from sidewalk_access import __version__
from sidewalk_access.analysis import (
    analysis_report,
    derive_confidence,
    tally_passability,
)
from sidewalk_access.errors import (
    GraphError,
    InterfaceError,
    SidewalkAccessError,
    UnknownProfileError,
)
from sidewalk_access.geo import (
    DEFAULT_MERGE_EPS_M,
    DEFAULT_SNAP_MAX_M,
    GeoPoint,
    _check_point,
    build_graph,
    load_graph,
    parse_labels,
    save_graph,
    snap_labels,
)
from sidewalk_access.jsonio import write_canonical
from sidewalk_access.model import parse_survey_dataset
from sidewalk_access.profiles import (
    SHORTEST_PROFILE_ID,
    GroupProfile,
    build_profiles,
    load_profiles,
    save_profiles,
    shortest_profile,
)
from sidewalk_access.routing import (
    DEFAULT_ENDPOINT_SNAP_M,
    compare_routes,
    route as compute_route,
    routes_to_geojson,
)
from sidewalk_access.scoring import (
    DEFAULT_PERCENTILE,
    compute_normalizer,
    neighborhood_scores_geojson,
    parse_neighborhoods,
    segment_scores_geojson,
)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _die(rec: dict) -> None:
    click.echo(json.dumps(rec, sort_keys=True), err=True)
    raise SystemExit(1)


def engine_errors(fn):
    """Turn engine and I/O failures into stderr records + exit 1."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except SidewalkAccessError as err:
            _die(err.record())
        except OSError as err:
            msg = err.strerror or str(err)
            if getattr(err, "filename", None):
                msg = f"{msg}: {err.filename}"
            _die({"module": "cli", "kind": "io", "message": msg})

    return wrapper


def _parse_latlon(text: str, name: str) -> GeoPoint:
    parts = text.split(",")
    if len(parts) != 2:
        raise InterfaceError(f"{name} must be 'lat,lon', got {text!r}")
    try:
        lat = float(parts[0])
        lon = float(parts[1])
    except ValueError:
        raise InterfaceError(f"{name} must be 'lat,lon', got {text!r}") from None
    try:
        return _check_point(lat, lon, name)
    except GraphError as exc:
        raise InterfaceError(str(exc)) from None


def _load_profile_map(path: str) -> dict[str, GroupProfile]:
    return {p.profile_id: p for p in load_profiles(_read(path))}


def _pick_profile(profiles: dict[str, GroupProfile], profile_id: str) -> GroupProfile:
    prof = profiles.get(profile_id)
    if prof is None:
        if profile_id == SHORTEST_PROFILE_ID:
            return shortest_profile()
        raise UnknownProfileError(profile_id)
    return prof


@click.group()
@click.version_option(__version__, prog_name="sidewalk-access")
def main():
    """Survey-driven sidewalk accessibility scoring and routing."""


@main.command()
@click.option("--survey", required=True, type=click.Path(), help="Survey dataset JSON.")
@click.option("--out-profiles", required=True, type=click.Path())
@click.option("--out-report", required=True, type=click.Path())
@click.option(
    "--include-other",
    is_flag=True,
    help="Keep the catch-all aid group in the report tallies.",
)
@engine_errors
def analyze(survey, out_profiles, out_report, include_other):
    """Derive per-group confidence profiles and a full analysis report."""
    dataset = parse_survey_dataset(_read(survey))
    report = analysis_report(dataset, include_other=include_other)
    table = derive_confidence(tally_passability(dataset, "label_type"))
    profiles = build_profiles(table)
    Path(out_profiles).write_text(save_profiles(profiles), encoding="utf-8")
    write_canonical(out_report, report)


@main.command()
@click.option("--sidewalks", required=True, type=click.Path(), help="GeoJSON centerlines.")
@click.option("--labels", "labels_path", required=True, type=click.Path())
@click.option("--out", required=True, type=click.Path())
@click.option("--merge-eps-m", default=DEFAULT_MERGE_EPS_M, show_default=True)
@click.option("--snap-max-m", default=DEFAULT_SNAP_MAX_M, show_default=True)
@engine_errors
def graph(sidewalks, labels_path, out, merge_eps_m, snap_max_m):
    """Build the sidewalk graph and snap crowdsourced labels onto it."""
    g = build_graph(_read(sidewalks), merge_eps_m=merge_eps_m)
    labels = parse_labels(_read(labels_path))
    g = snap_labels(g, labels, max_snap_m=snap_max_m)
    Path(out).write_text(save_graph(g), encoding="utf-8")


@main.command()
@click.option("--graph", "graph_path", required=True, type=click.Path())
@click.option("--profiles", "profiles_path", required=True, type=click.Path())
@click.option("--profile-id", required=True)
@click.option("--level", required=True, type=click.Choice(["segment", "neighborhood"]))
@click.option("--neighborhoods", "neighborhoods_path", type=click.Path(), default=None)
@click.option("--percentile", default=DEFAULT_PERCENTILE, show_default=True)
@click.option("--out", required=True, type=click.Path())
@engine_errors
def score(graph_path, profiles_path, profile_id, level, neighborhoods_path, percentile, out):
    """Score segments (or neighborhoods) for one profile."""
    g = load_graph(_read(graph_path))
    profile = _pick_profile(_load_profile_map(profiles_path), profile_id)
    normalizer = compute_normalizer(g, profile, percentile)
    if level == "segment":
        doc = segment_scores_geojson(g, profile, normalizer)
    else:
        if neighborhoods_path is None:
            raise InterfaceError("--neighborhoods is required when --level neighborhood")
        nb = parse_neighborhoods(_read(neighborhoods_path))
        doc = neighborhood_scores_geojson(g, nb, profile, normalizer)
    write_canonical(out, doc)


@main.command(name="route")
@click.option("--graph", "graph_path", required=True, type=click.Path())
@click.option("--profiles", "profiles_path", required=True, type=click.Path())
@click.option(
    "--profile-id",
    "profile_ids",
    required=True,
    multiple=True,
    help="Repeat to compare several profiles in one call.",
)
@click.option("--from", "from_", required=True, help="Origin as 'lat,lon'.")
@click.option("--to", required=True, help="Destination as 'lat,lon'.")
@click.option("--snap-max-m", default=DEFAULT_ENDPOINT_SNAP_M, show_default=True)
@click.option("--algorithm", default="astar", type=click.Choice(["astar", "dijkstra"]))
@click.option("--out", required=True, type=click.Path())
@engine_errors
def route_cmd(graph_path, profiles_path, profile_ids, from_, to, snap_max_m, algorithm, out):
    """Personalized route(s) between two coordinates."""
    g = load_graph(_read(graph_path))
    pmap = _load_profile_map(profiles_path)
    origin = _parse_latlon(from_, "origin")
    dest = _parse_latlon(to, "destination")
    if len(profile_ids) == 1:
        r = compute_route(
            g,
            _pick_profile(pmap, profile_ids[0]),
            origin,
            dest,
            snap_max_m=snap_max_m,
            algorithm=algorithm,
        )
        routes = [r]
    else:
        routes = compare_routes(
            g,
            [_pick_profile(pmap, pid) for pid in profile_ids],
            origin,
            dest,
            snap_max_m=snap_max_m,
            algorithm=algorithm,
        )
    write_canonical(out, routes_to_geojson(g, routes))


@main.command()
@click.option("--config", required=True, type=click.Path(), help="Service config JSON.")
@engine_errors
def serve(config):
    """Run the HTTP service."""
    import uvicorn

    from sidewalk_access.service import build_app, load_config

    cfg = load_config(config)
    app = build_app(cfg)
    uvicorn.run(app, host=cfg.host, port=cfg.port, log_level="info")


if __name__ == "__main__":
    main()
