"""Per-profile accessibility scores at segment and neighborhood scale.

score = clamp(1 - penalty / normalizer, 0, 1), where penalty is the sum
of the profile's confidence weights over the labels attached to a
segment and the normalizer is a percentile of positive penalties.  The
normalizer travels with every export so published maps are reproducible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from sidewalk_access.errors import ScoringError
from sidewalk_access.geo import Edge, GeoPoint, SidewalkGraph, haversine_m
from sidewalk_access.profiles import GroupProfile

DEFAULT_PERCENTILE = 95.0


@dataclass(frozen=True)
class SegmentScore:
    edge_id: str
    penalty: float
    score: float


@dataclass(frozen=True)
class NeighborhoodScore:
    neighborhood_id: str
    score: float
    covered_length_m: float


def segment_penalty(edge: Edge, profile: GroupProfile) -> float:
    """Sum of C over the labels attached to this edge."""
    acc = 0.0
    for att in edge.labels:
        acc += profile.c(att.label.label_type)
    return acc


def compute_normalizer(
    graph: SidewalkGraph, profile: GroupProfile, percentile: float = DEFAULT_PERCENTILE
) -> float:
    """Nearest-rank percentile of the positive segment penalties.

    Falls back to 1.0 when no segment carries any penalty, which makes
    every score 1 on a label-free graph.
    """
    if not 0.0 < percentile <= 100.0:
        raise ScoringError(f"percentile must be in (0, 100], got {percentile}")
    positives = sorted(
        p
        for edge_id in sorted(graph.edges)
        if (p := segment_penalty(graph.edges[edge_id], profile)) > 0.0
    )
    if not positives:
        return 1.0
    # exact ceil of percentile/100 * n; float rounding must not bump
    # the rank across an integer boundary
    k = math.ceil(Fraction(percentile) * len(positives) / 100)
    k = min(max(k, 1), len(positives))
    return positives[k - 1]


def _clamp01(x: float) -> float:
    if x < 0.0:
        return 0.0
    if x > 1.0:
        return 1.0
    return x


def segment_scores(
    graph: SidewalkGraph, profile: GroupProfile, normalizer: float
) -> dict[str, SegmentScore]:
    if not normalizer > 0.0:
        raise ScoringError(f"normalizer must be positive, got {normalizer}")
    out = {}
    for edge_id in sorted(graph.edges):
        penalty = segment_penalty(graph.edges[edge_id], profile)
        score = _clamp01(1.0 - penalty / normalizer)
        out[edge_id] = SegmentScore(edge_id=edge_id, penalty=penalty, score=score)
    return out


def _edge_midpoint(edge: Edge) -> GeoPoint:
    """Point halfway along the polyline by arc length."""
    pts = edge.polyline
    if len(pts) == 2:
        return GeoPoint(
            (pts[0].lat + pts[1].lat) / 2.0, (pts[0].lon + pts[1].lon) / 2.0
        )
    half = edge.length_m / 2.0
    acc = 0.0
    for i in range(len(pts) - 1):
        step = haversine_m(pts[i], pts[i + 1])
        if acc + step >= half and step > 0.0:
            t = (half - acc) / step
            return GeoPoint(
                pts[i].lat + t * (pts[i + 1].lat - pts[i].lat),
                pts[i].lon + t * (pts[i + 1].lon - pts[i].lon),
            )
        acc += step
    return pts[-1]


def _point_in_rings(lon: float, lat: float, rings) -> bool:
    # even-odd ray casting over every ring, so holes subtract
    inside = False
    for ring in rings:
        n = len(ring) - 1  # last vertex repeats the first
        for i in range(n):
            x1, y1 = ring[i]
            x2, y2 = ring[i + 1]
            if (y1 > lat) != (y2 > lat):
                x_cross = x1 + (lat - y1) / (y2 - y1) * (x2 - x1)
                if lon < x_cross:
                    inside = not inside
    return inside


def parse_neighborhoods(text: str) -> list[tuple[str, list]]:
    """Parse a FeatureCollection of (Multi)Polygons.

    Returns (neighborhood_id, list of polygons) pairs, each polygon a
    list of rings, each ring a closed list of [lon, lat] pairs.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScoringError(f"neighborhoods document is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise ScoringError("neighborhoods document must be a FeatureCollection")
    out = []
    seen: set[str] = set()
    for i, feat in enumerate(doc.get("features", [])):
        where = f"features[{i}]"
        props = (feat or {}).get("properties") or {}
        nid = props.get("neighborhood_id") or props.get("id")
        if not isinstance(nid, str) or not nid:
            raise ScoringError(f"{where}: missing neighborhood_id property")
        if nid in seen:
            raise ScoringError(f"{where}: duplicate neighborhood_id {nid!r}")
        seen.add(nid)
        geom = feat.get("geometry") or {}
        gtype = geom.get("type")
        if gtype == "Polygon":
            polys = [geom.get("coordinates")]
        elif gtype == "MultiPolygon":
            polys = geom.get("coordinates")
        else:
            raise ScoringError(f"{where}: geometry must be Polygon or MultiPolygon")
        for poly in polys:
            if not isinstance(poly, list) or not poly:
                raise ScoringError(f"{where}: invalid polygon")
            for ring in poly:
                if not isinstance(ring, list) or len(ring) < 4:
                    raise ScoringError(f"{where}: ring needs at least 4 positions")
                if ring[0] != ring[-1]:
                    raise ScoringError(f"{where}: ring is not closed")
        out.append((nid, polys))
    return out


def neighborhood_scores(
    graph: SidewalkGraph,
    neighborhoods: list[tuple[str, list]],
    profile: GroupProfile,
    normalizer: float,
) -> tuple[dict[str, NeighborhoodScore], list[str]]:
    """Length-weighted mean segment score per neighborhood.

    Membership is decided by the edge midpoint.  Returns the scores and
    the ids of neighborhoods that cover no segment at all.
    """
    seg = segment_scores(graph, profile, normalizer)
    midpoints = {
        edge_id: _edge_midpoint(graph.edges[edge_id]) for edge_id in sorted(graph.edges)
    }
    scores: dict[str, NeighborhoodScore] = {}
    empty: list[str] = []
    for nid, polys in neighborhoods:
        weighted = []
        lengths = []
        for edge_id in sorted(graph.edges):
            mid = midpoints[edge_id]
            if any(_point_in_rings(mid.lon, mid.lat, poly) for poly in polys):
                edge = graph.edges[edge_id]
                weighted.append(seg[edge_id].score * edge.length_m)
                lengths.append(edge.length_m)
        total = math.fsum(lengths)
        if total <= 0.0:
            empty.append(nid)
            continue
        scores[nid] = NeighborhoodScore(
            neighborhood_id=nid,
            score=_clamp01(math.fsum(weighted) / total),
            covered_length_m=total,
        )
    return scores, empty


def segment_scores_geojson(
    graph: SidewalkGraph,
    profile: GroupProfile,
    normalizer: float,
) -> dict:
    """Choropleth-ready FeatureCollection of scored edges."""
    scores = segment_scores(graph, profile, normalizer)
    features = []
    for edge_id in sorted(graph.edges):
        edge = graph.edges[edge_id]
        s = scores[edge_id]
        features.append(
            {
                "type": "Feature",
                "geometry": {
                    "type": "LineString",
                    "coordinates": [[p.lon, p.lat] for p in edge.polyline],
                },
                "properties": {
                    "edge_id": edge_id,
                    "kind": edge.kind,
                    "length_m": edge.length_m,
                    "penalty": s.penalty,
                    "score": s.score,
                    "profile_id": profile.profile_id,
                    "normalizer": normalizer,
                    "labels": [
                        {
                            "label_id": a.label.label_id,
                            "label_type": a.label.label_type.value,
                            "severity": a.label.severity.value,
                        }
                        for a in edge.labels
                    ],
                },
            }
        )
    return {"type": "FeatureCollection", "features": features}


def neighborhood_scores_geojson(
    graph: SidewalkGraph,
    neighborhoods: list[tuple[str, list]],
    profile: GroupProfile,
    normalizer: float,
) -> dict:
    scores, empty = neighborhood_scores(graph, neighborhoods, profile, normalizer)
    features = []
    for nid, polys in neighborhoods:
        geometry = (
            {"type": "Polygon", "coordinates": polys[0]}
            if len(polys) == 1
            else {"type": "MultiPolygon", "coordinates": polys}
        )
        props: dict = {
            "neighborhood_id": nid,
            "profile_id": profile.profile_id,
            "normalizer": normalizer,
        }
        if nid in scores:
            props["score"] = scores[nid].score
            props["covered_length_m"] = scores[nid].covered_length_m
        else:
            props["absent"] = True
        features.append(
            {"type": "Feature", "geometry": geometry, "properties": props}
        )
    return {"type": "FeatureCollection", "features": features}
