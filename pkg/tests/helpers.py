"""Small geometry builders shared by the geo, scoring, and routing tests.

Coordinates are given in meters east/north of a base corner and turned
into lon/lat, which keeps the test layouts readable.
"""

from __future__ import annotations

import math

from sidewalk_access._kernels import EARTH_RADIUS_M
from sidewalk_access.geo import build_graph, parse_labels, snap_labels
from sidewalk_access.jsonio import canonical_dumps

LAT0 = 47.0
LON0 = -122.0
DLAT = 180.0 / (math.pi * EARTH_RADIUS_M)
DLON = DLAT / math.cos(math.radians(LAT0))


def at(x_m: float, y_m: float) -> list[float]:
    """[lon, lat] for x meters east, y meters north of the base."""
    return [LON0 + x_m * DLON, LAT0 + y_m * DLAT]


def latlon(x_m: float, y_m: float) -> tuple[float, float]:
    lon, lat = at(x_m, y_m)
    return lat, lon


def feature(kind: str, pts, explicit_id: str | None = None) -> dict:
    props = {"kind": kind}
    if explicit_id is not None:
        props["id"] = explicit_id
    return {
        "type": "Feature",
        "geometry": {
            "type": "LineString",
            "coordinates": [at(x, y) for x, y in pts],
        },
        "properties": props,
    }


def geojson(features) -> str:
    return canonical_dumps({"type": "FeatureCollection", "features": features})


def label(label_id: str, label_type: str, severity: int, x: float, y: float) -> dict:
    lon, lat = at(x, y)
    return {
        "label_id": label_id,
        "label_type": label_type,
        "severity": severity,
        "lat": lat,
        "lng": lon,
    }


def graph_of(features, labels=(), merge_eps_m: float = 0.5, snap_max_m: float = 20.0,
             use_grid: bool = True):
    g = build_graph(geojson(list(features)), merge_eps_m=merge_eps_m)
    if labels:
        g = snap_labels(
            g,
            parse_labels(canonical_dumps(list(labels))),
            max_snap_m=snap_max_m,
            use_grid=use_grid,
        )
    return g


def grid_layout(rng, n: int = 4, label_rate: float = 0.4):
    """Random n x n grid with labels near some edge midpoints.

    Returns (graph, origin GeoPoint, dest GeoPoint) with the endpoints
    just off opposite corners.
    """
    from sidewalk_access.geo import GeoPoint

    xs, ys = [0.0], [0.0]
    for _ in range(n - 1):
        xs.append(xs[-1] + rng.uniform(40, 160))
        ys.append(ys[-1] + rng.uniform(40, 160))
    feats = []
    for i in range(n):
        for j in range(n):
            if i + 1 < n:
                feats.append(feature(
                    "sidewalk", [(xs[i], ys[j]), (xs[i + 1], ys[j])],
                    explicit_id=f"h_{i}_{j}",
                ))
            if j + 1 < n:
                feats.append(feature(
                    "sidewalk", [(xs[i], ys[j]), (xs[i], ys[j + 1])],
                    explicit_id=f"v_{i}_{j}",
                ))
    labels = []
    k = 0
    for i in range(n):
        for j in range(n):
            if i + 1 < n and rng.random() < label_rate:
                labels.append(label(
                    f"l{k:03d}", rng.choice(["obstacle", "surface_problem"]),
                    rng.randrange(1, 6),
                    (xs[i] + xs[i + 1]) / 2, ys[j] + 0.5,
                ))
                k += 1
            if j + 1 < n and rng.random() < label_rate:
                labels.append(label(
                    f"l{k:03d}", rng.choice(["obstacle", "surface_problem"]),
                    rng.randrange(1, 6),
                    xs[i] + 0.5, (ys[j] + ys[j + 1]) / 2,
                ))
                k += 1
    g = graph_of(feats, labels)
    origin = GeoPoint(*latlon(xs[0] - 1.0, ys[0] - 1.0))
    dest = GeoPoint(*latlon(xs[-1] + 1.0, ys[-1] + 1.0))
    return g, origin, dest


def fold_from_dest(weights) -> float:
    """Path cost accumulated the way the backward solver builds it."""
    acc = 0.0
    for w in reversed(weights):
        acc = acc + w
    return acc


def best_simple_path_cost(g, edge_cost, origin_node, dest_node) -> float:
    """Minimum fold_from_dest cost over every simple path, by DFS."""
    adj = g.adjacency()
    best = math.inf
    stack_w = []
    visited = {origin_node}

    def dfs(u):
        nonlocal best
        if u == dest_node:
            c = fold_from_dest(stack_w)
            if c < best:
                best = c
            return
        for v, eid in adj[u]:
            if v not in visited:
                visited.add(v)
                stack_w.append(edge_cost[eid])
                dfs(v)
                stack_w.pop()
                visited.remove(v)

    dfs(origin_node)
    return best
