#!/usr/bin/env python3
"""Regenerates everything under data/.

The survey fixture is synthesized so the derived confidence table hits
round numbers (cane surface problems 54/100, motorized missing curb
ramps 48/60, and so on), the graph fixture plants a detour scenario
whose outcome depends on the profile, and the golden files are whatever
the pipeline produces for these inputs.  Deterministic: duel outcomes
and ranking jitter use per-record seeds, so the output bytes never
depend on iteration order or interpreter hash randomization.

Run from the repo root:  python3 tools/make_fixtures.py
"""

from __future__ import annotations

import math
import random
import sys
from pathlib import Path

from sidewalk_access._kernels import EARTH_RADIUS_M
from sidewalk_access.analysis import (
    analysis_report,
    derive_confidence,
    schedule_comparisons,
    tally_passability,
)
from sidewalk_access.geo import build_graph, parse_labels, save_graph, snap_labels
from sidewalk_access.jsonio import canonical_dumps
from sidewalk_access.model import (
    SEVERITY_ORDER,
    RANKING_ITEMS,
    Severity,
    Vote,
    parse_survey_dataset,
)
from sidewalk_access.profiles import build_profiles, save_profiles
from sidewalk_access.routing import compare_routes, route, routes_to_geojson
from sidewalk_access.scoring import (
    compute_normalizer,
    neighborhood_scores_geojson,
    parse_neighborhoods,
    segment_scores_geojson,
)
from sidewalk_access.geo import GeoPoint

DATA = Path(__file__).resolve().parent.parent / "data"

# ----------------------------------------------------------------- survey

IMAGES = [
    # image_id, subcategory, label_type, severity, city
    ("img_mcr_01", "missing_curb_ramp", "missing_curb_ramp", "high", "seattle"),
    ("img_mcr_02", "missing_curb_ramp", "missing_curb_ramp", "high", "chicago"),
    ("img_mcr_03", "missing_curb_ramp", "missing_curb_ramp", "mid", "seattle"),
    ("img_mcr_04", "missing_curb_ramp", "missing_curb_ramp", "mid", None),
    ("img_mcr_05", "missing_curb_ramp", "missing_curb_ramp", "low", "chicago"),
    ("img_mcr_06", "missing_curb_ramp", "missing_curb_ramp", "low", "seattle"),
    ("img_cr_01", "curb_ramp", "curb_ramp", "low", "seattle"),
    ("img_cr_02", "curb_ramp", "curb_ramp", "mid", "chicago"),
    ("img_obs_fh_01", "fire_hydrant_pole", "obstacle", "mid", "seattle"),
    ("img_obs_vg_01", "vegetation", "obstacle", "low", None),
    ("img_obs_pv_01", "parked_vehicles", "obstacle", "high", "chicago"),
    ("img_sp_ck_01", "cracks_height_diff", "surface_problem", "high", "seattle"),
    ("img_sp_bc_01", "brick_cobblestone_panels", "surface_problem", "mid", "chicago"),
    ("img_sp_sg_01", "sand_gravel_grass", "surface_problem", "mid", "seattle"),
    ("img_sp_nw_01", "narrow", "surface_problem", "low", None),
]

GROUP_SIZES = {
    "walking_cane": 25,
    "walker": 10,
    "mobility_scooter": 10,
    "manual_wheelchair": 10,
    "motorized_wheelchair": 10,
    "other": 2,
}

GROUP_PREFIX = {
    "walking_cane": "r_cane",
    "walker": "r_walk",
    "mobility_scooter": "r_scoot",
    "manual_wheelchair": "r_manw",
    "motorized_wheelchair": "r_motw",
    "other": "r_other",
}

# Impassable (No + Unsure) counts per group and label type.  Totals are
# group size times image count of the type, so each ratio below is the
# C value the pipeline must reproduce, exactly: e.g. the cane surface
# cell is 54 of 100 votes and the motorized missing-ramp cell 48 of 60.
IMPASSABLE = {
    #                  obstacle  surface  curb_ramp  missing
    "walking_cane": {"obstacle": 30, "surface_problem": 54, "curb_ramp": 10, "missing_curb_ramp": 60},
    "walker": {"obstacle": 12, "surface_problem": 18, "curb_ramp": 5, "missing_curb_ramp": 33},
    "mobility_scooter": {"obstacle": 15, "surface_problem": 14, "curb_ramp": 6, "missing_curb_ramp": 42},
    "manual_wheelchair": {"obstacle": 18, "surface_problem": 16, "curb_ramp": 8, "missing_curb_ramp": 45},
    "motorized_wheelchair": {"obstacle": 21, "surface_problem": 12, "curb_ramp": 7, "missing_curb_ramp": 48},
    "other": {"obstacle": 3, "surface_problem": 4, "curb_ramp": 1, "missing_curb_ramp": 6},
}

EXPECTED_C = {
    "walking_cane": {"obstacle": 0.4, "surface_problem": 0.54, "curb_ramp": 0.2, "missing_curb_ramp": 0.4},
    "walker": {"obstacle": 0.4, "surface_problem": 0.45, "curb_ramp": 0.25, "missing_curb_ramp": 0.55},
    "mobility_scooter": {"obstacle": 0.5, "surface_problem": 0.35, "curb_ramp": 0.3, "missing_curb_ramp": 0.7},
    "manual_wheelchair": {"obstacle": 0.6, "surface_problem": 0.4, "curb_ramp": 0.4, "missing_curb_ramp": 0.75},
    "motorized_wheelchair": {"obstacle": 0.7, "surface_problem": 0.3, "curb_ramp": 0.35, "missing_curb_ramp": 0.8},
}

# Part-3 orderings, most difficult first.  Wheelchair and scooter
# respondents put missing curb ramps at the top; cane users worry more
# about footing.
BASE_ORDERS = {
    "walking_cane": (
        "steep_slope", "uneven_panels", "broken_surface", "missing_curb_ramp",
        "narrow_sidewalk", "sand_gravel", "grass_surface", "brick_cobblestone",
        "manhole_covers",
    ),
    "walker": (
        "missing_curb_ramp", "steep_slope", "uneven_panels", "broken_surface",
        "narrow_sidewalk", "sand_gravel", "grass_surface", "brick_cobblestone",
        "manhole_covers",
    ),
    "mobility_scooter": (
        "missing_curb_ramp", "narrow_sidewalk", "steep_slope", "uneven_panels",
        "broken_surface", "sand_gravel", "brick_cobblestone", "grass_surface",
        "manhole_covers",
    ),
    "manual_wheelchair": (
        "missing_curb_ramp", "steep_slope", "narrow_sidewalk", "uneven_panels",
        "broken_surface", "brick_cobblestone", "sand_gravel", "grass_surface",
        "manhole_covers",
    ),
    "motorized_wheelchair": (
        "missing_curb_ramp", "narrow_sidewalk", "uneven_panels", "steep_slope",
        "broken_surface", "sand_gravel", "grass_surface", "brick_cobblestone",
        "manhole_covers",
    ),
    "other": (
        "missing_curb_ramp", "steep_slope", "uneven_panels", "narrow_sidewalk",
        "broken_surface", "sand_gravel", "grass_surface", "brick_cobblestone",
        "manhole_covers",
    ),
}


def respondent_ids():
    out = {}
    for group, size in GROUP_SIZES.items():
        out[group] = [f"{GROUP_PREFIX[group]}_{i:02d}" for i in range(1, size + 1)]
    return out


def build_survey() -> str:
    rids = respondent_ids()

    respondents = {}
    for group, ids in rids.items():
        for i, rid in enumerate(ids):
            if group == "other":
                descriptor = ["crutches", "prosthetic_leg"][i]
                respondents[rid] = {"aid": "other", "descriptor": descriptor}
            else:
                respondents[rid] = group

    images = []
    for image_id, sub, lt, sev, city in IMAGES:
        rec = {
            "image_id": image_id,
            "subcategory": sub,
            "label_type": lt,
            "severity": sev,
        }
        if city is not None:
            rec["city"] = city
        images.append(rec)

    # Pair enumeration is image-major with images ordered worst first,
    # so the impassable budget lands on high-severity images before the
    # mild ones and the severity-resolved tallies slope the right way.
    by_type: dict[str, list[tuple[str, str]]] = {}
    for image_id, _sub, lt, sev, _city in IMAGES:
        by_type.setdefault(lt, []).append((image_id, sev))
    for lt in by_type:
        by_type[lt].sort(key=lambda t: (-SEVERITY_ORDER[Severity(t[1])], t[0]))

    votes: dict[tuple[str, str], str] = {}
    for group, ids in rids.items():
        for lt, imgs in sorted(by_type.items()):
            budget = IMPASSABLE[group][lt]
            pairs = [(img, rid) for img, _sev in imgs for rid in ids]
            assert budget <= len(pairs), (group, lt)
            for k, (img, rid) in enumerate(pairs):
                if k < budget:
                    votes[(rid, img)] = "unsure" if k % 3 == 2 else "no"
                else:
                    votes[(rid, img)] = "yes"

    passability = [
        {"respondent_id": rid, "image_id": img, "vote": v}
        for (rid, img), v in sorted(votes.items())
    ]

    # Duels follow each respondent's own comparison schedule for the
    # subcategory pools that have at least two images.
    difficulty: dict[str, int] = {}
    pools: dict[str, list[str]] = {}
    for image_id, sub, lt, _sev, _city in IMAGES:
        pools.setdefault(sub, []).append(image_id)
    for lt, imgs in by_type.items():
        for rank, (img, _sev) in enumerate(imgs):
            difficulty[img] = rank  # lower = harder within its type

    duels = []
    for group, ids in sorted(rids.items()):
        for rid in ids:
            for sub, imgs in sorted(pools.items()):
                if len(imgs) < 2:
                    continue
                myvotes = {img: Vote(votes[(rid, img)]) for img in imgs}
                for a, b in schedule_comparisons(myvotes):
                    rng = random.Random(f"duel|{rid}|{a}|{b}")
                    harder = a if difficulty[a] <= difficulty[b] else b
                    easier = b if harder == a else a
                    u = rng.random()
                    if u < 0.08:
                        choice = "same"
                    elif u < 0.80:
                        choice = "left" if harder == a else "right"
                    else:
                        choice = "left" if easier == a else "right"
                    duels.append(
                        {"respondent_id": rid, "left": a, "right": b, "choice": choice}
                    )

    rankings = []
    for group, ids in sorted(rids.items()):
        base = list(BASE_ORDERS[group])
        for rid in ids:
            rng = random.Random(f"rank|{rid}")
            order = list(base)
            for _ in range(rng.randrange(0, 4)):
                pos = rng.randrange(0, len(order) - 1)
                order[pos], order[pos + 1] = order[pos + 1], order[pos]
            rankings.append({"respondent_id": rid, "ordering": order})

    doc = {
        "images": images,
        "respondents": respondents,
        "passability": passability,
        "duels": duels,
        "rankings": rankings,
    }
    return canonical_dumps(doc)


# ------------------------------------------------------------------ graph

LAT0 = 47.66
LON0 = -122.315
DLAT = 180.0 / (math.pi * EARTH_RADIUS_M)  # degrees latitude per meter
DLON = DLAT / math.cos(math.radians(LAT0))


def at(x_m: float, y_m: float) -> list[float]:
    """[lon, lat] for a point x meters east, y meters north of the base."""
    return [LON0 + x_m * DLON, LAT0 + y_m * DLAT]


def ll(x_m: float, y_m: float) -> GeoPoint:
    lon, lat = at(x_m, y_m)
    return GeoPoint(lat, lon)


# Node plan, in meters east/north of the base corner.
#
#   W1(-80,200)  N0(0,200)   N1(100,200) N1b(106,200) N2(200,200) N3(300,200)
#      |            |           |planted    |detour       |           |
#   W2(-80,100)  S0(0,100)   S1(100,100) S1b(106,100) S2(200,100) S3(300,100)
#                               |
#                             E0(100,0)            X0(100,300) above N1
#
# The direct crossing S1-N1 carries two missing-ramp labels; the
# staggered pair S1b-N1b plus its 6 m connectors is the clean detour.
# With the derived profiles the direct arc weighs 100 * 1.16 = 116 for
# motorized users (C = 0.80 twice) but 100 * 1.08 = 108 for cane users
# (C = 0.40 twice), and the detour totals 112, which splits the two.
# Both spurs hang off the x = 100 corners so the connectors burden only
# the detour.

SIDEWALK_FEATURES = [
    # (explicit_id or None, kind, [(x, y), ...])
    (None, "sidewalk", [(0, 100), (100, 100)]),
    ("w_connector_s", "sidewalk", [(100, 100), (106, 100)]),
    (None, "sidewalk", [(106, 100), (200, 100)]),
    (None, "sidewalk", [(200, 100), (300, 100)]),
    (None, "sidewalk", [(0, 200), (100, 200)]),
    ("w_connector_n", "sidewalk", [(100, 200), (106, 200)]),
    (None, "sidewalk", [(106, 200), (200, 200)]),
    (None, "sidewalk", [(200, 200), (300, 200)]),
    # endpoint jittered 0.3 m east: must merge into S1 under the 0.5 m rule
    ("x_planted", "crossing", [(100.3, 100), (100, 200)]),
    # endpoint jittered 0.35 m north: must merge into N1b
    ("x_detour", "crossing", [(106, 100), (106, 200.35)]),
    (None, "crossing", [(200, 100), (200, 200)]),
    (None, "crossing", [(0, 100), (0, 200)]),
    (None, "sidewalk", [(100, 0), (100, 100)]),
    (None, "sidewalk", [(100, 200), (100, 300)]),
    (None, "crossing", [(300, 100), (300, 200)]),
    (None, "sidewalk", [(-80, 200), (0, 200)]),
    (None, "sidewalk", [(-80, 100), (0, 100)]),
    (None, "crossing", [(-80, 100), (-80, 200)]),
    # detached block far to the east
    (None, "sidewalk", [(2500, 0), (2560, 0)]),
    (None, "crossing", [(2560, 0), (2560, 80)]),
]

LABELS = [
    # label_id, label_type, severity 1-5, (x, y)
    ("lab_001", "surface_problem", 4, (50, 99.0)),
    ("lab_002", "obstacle", 3, (150, 101.1)),
    ("lab_003", "surface_problem", 2, (30, 200.8)),
    ("lab_004", "obstacle", 5, (260, 198.9)),
    ("lab_005", "missing_curb_ramp", 5, (101.0, 110)),
    ("lab_006", "missing_curb_ramp", 4, (101.2, 190)),
    ("lab_007", "curb_ramp", 1, (199.1, 115)),
    ("lab_008", "curb_ramp", 2, (0.9, 185)),
    ("lab_009", "surface_problem", 3, (99.2, 40)),
    ("lab_010", "missing_curb_ramp", 2, (300.9, 150)),
    # nothing anywhere near this one
    ("lab_011", "surface_problem", 3, (-500, 500)),
    # one meter from a sidewalk, but ramps may only live on crossings,
    # and the nearest crossing is ~50 m away: stays unsnapped
    ("lab_012", "missing_curb_ramp", 4, (50, 99.0)),
    ("lab_013", "obstacle", 3, (2530, 1.2)),
]


def build_sidewalks() -> str:
    features = []
    for explicit, kind, pts in SIDEWALK_FEATURES:
        props = {"kind": kind}
        if explicit is not None:
            props["id"] = explicit
        features.append(
            {
                "type": "Feature",
                "geometry": {
                    "type": "LineString",
                    "coordinates": [at(x, y) for x, y in pts],
                },
                "properties": props,
            }
        )
    return canonical_dumps({"type": "FeatureCollection", "features": features})


def build_labels() -> str:
    out = []
    for label_id, lt, sev, (x, y) in LABELS:
        lon, lat = at(x, y)
        out.append(
            {
                "label_id": label_id,
                "label_type": lt,
                "severity": sev,
                "lat": lat,
                "lng": lon,
            }
        )
    return canonical_dumps(out)


def build_neighborhoods() -> str:
    def rect(x0, y0, x1, y1):
        return [
            [at(x0, y0), at(x1, y0), at(x1, y1), at(x0, y1), at(x0, y0)]
        ]

    features = [
        {
            "type": "Feature",
            "geometry": {"type": "Polygon", "coordinates": rect(-120, -30, 150, 330)},
            "properties": {"neighborhood_id": "riverside"},
        },
        {
            "type": "Feature",
            "geometry": {"type": "Polygon", "coordinates": rect(150, -30, 350, 330)},
            "properties": {"neighborhood_id": "hilltop"},
        },
        {
            # covers no segment at all; scoring must mark it absent
            "type": "Feature",
            "geometry": {"type": "Polygon", "coordinates": rect(5000, 0, 5100, 100)},
            "properties": {"neighborhood_id": "greenbelt"},
        },
    ]
    return canonical_dumps({"type": "FeatureCollection", "features": features})


# ------------------------------------------------------------------- main


def main() -> int:
    DATA.mkdir(exist_ok=True)
    (DATA / "golden").mkdir(exist_ok=True)

    survey_text = build_survey()
    (DATA / "survey.json").write_text(survey_text, encoding="utf-8")
    dataset = parse_survey_dataset(survey_text)

    table = derive_confidence(tally_passability(dataset, "label_type"))
    for group, cells in EXPECTED_C.items():
        for lt, expected in cells.items():
            got = table.cells[
                next(k for k in table.cells if k[0].value == group and k[1].value == lt)
            ]
            assert got == expected, (group, lt, got, expected)

    profiles = build_profiles(table)
    profiles_text = save_profiles(profiles)
    (DATA / "profiles.json").write_text(profiles_text, encoding="utf-8")

    report = analysis_report(dataset)
    report_text = canonical_dumps(report)
    (DATA / "report.json").write_text(report_text, encoding="utf-8")

    sidewalks_text = build_sidewalks()
    (DATA / "sidewalks.geojson").write_text(sidewalks_text, encoding="utf-8")
    labels_text = build_labels()
    (DATA / "labels.json").write_text(labels_text, encoding="utf-8")

    graph = build_graph(sidewalks_text)
    graph = snap_labels(graph, parse_labels(labels_text))
    graph_text = save_graph(graph)
    (DATA / "graph.json").write_text(graph_text, encoding="utf-8")

    assert len(graph.edges) == 20, len(graph.edges)
    assert len(set(graph.components.values())) == 2
    unsnapped_ids = sorted(u.label.label_id for u in graph.unsnapped)
    assert unsnapped_ids == ["lab_011", "lab_012"], unsnapped_ids
    planted = graph.edges["x_planted"]
    assert sorted(a.label.label_id for a in planted.labels) == ["lab_005", "lab_006"]
    assert graph.edges["x_detour"].labels == ()

    neighborhoods_text = build_neighborhoods()
    (DATA / "neighborhoods.geojson").write_text(neighborhoods_text, encoding="utf-8")

    pmap = {p.profile_id: p for p in profiles}
    origin = ll(99, -2)
    dest = ll(101, 302)
    r_cane = route(graph, pmap["walking_cane"], origin, dest)
    r_motor = route(graph, pmap["motorized_wheelchair"], origin, dest)
    assert "x_planted" in r_cane.edges, r_cane.edges
    assert "x_planted" not in r_motor.edges, r_motor.edges
    assert "x_detour" in r_motor.edges, r_motor.edges

    scenario = {
        "origin": {"lat": origin.lat, "lon": origin.lon},
        "dest": {"lat": dest.lat, "lon": dest.lon},
        "planted_edge": "x_planted",
        "detour_edge": "x_detour",
        "direct_profile": "walking_cane",
        "detour_profile": "motorized_wheelchair",
        "disconnected_point": dict(zip(("lon", "lat"), at(2555, 2))),
        "unsnappable_point": dict(zip(("lon", "lat"), at(-2000, -2000))),
    }
    (DATA / "scenario.json").write_text(canonical_dumps(scenario), encoding="utf-8")

    service_cfg = {
        "graph": "graph.json",
        "profiles": "profiles.json",
        "neighborhoods": "neighborhoods.geojson",
        "host": "127.0.0.1",
        "port": 8793,
        "cors_allow_origins": ["http://localhost:5173"],
    }
    (DATA / "service.json").write_text(canonical_dumps(service_cfg), encoding="utf-8")

    # golden outputs for the end-to-end determinism check
    for pid in ("walking_cane", "motorized_wheelchair"):
        prof = pmap[pid]
        norm = compute_normalizer(graph, prof)
        doc = segment_scores_geojson(graph, prof, norm)
        (DATA / "golden" / f"scores_segment_{pid}.json").write_text(
            canonical_dumps(doc), encoding="utf-8"
        )
    nb = parse_neighborhoods(neighborhoods_text)
    prof = pmap["motorized_wheelchair"]
    norm = compute_normalizer(graph, prof)
    doc = neighborhood_scores_geojson(graph, nb, prof, norm)
    (DATA / "golden" / "scores_neighborhood_motorized_wheelchair.json").write_text(
        canonical_dumps(doc), encoding="utf-8"
    )
    routes = compare_routes(
        graph, [pmap["walking_cane"], pmap["motorized_wheelchair"]], origin, dest
    )
    doc = routes_to_geojson(graph, routes)
    (DATA / "golden" / "routes_planted.json").write_text(
        canonical_dumps(doc), encoding="utf-8"
    )

    n_votes = len(dataset.passability)
    print(f"survey: {len(dataset.images)} images, {len(dataset.respondents)} respondents, "
          f"{n_votes} votes, {len(dataset.duels)} duels, {len(dataset.rankings)} rankings")
    print(f"graph: {len(graph.nodes)} nodes, {len(graph.edges)} edges, "
          f"{len(set(graph.components.values()))} components, "
          f"{len(graph.unsnapped)} unsnapped labels")
    print(f"planted check: cane via {sorted(set(r_cane.edges) & {'x_planted', 'x_detour'})}, "
          f"motorized via {sorted(set(r_motor.edges) & {'x_planted', 'x_detour'})}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
