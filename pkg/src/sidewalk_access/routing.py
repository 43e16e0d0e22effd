"""Personalized shortest paths over the labeled sidewalk graph.

Edge cost is the weighted length: metric length plus 10% of it per
unit of summed label confidence.  The solver runs a backward
label-setting pass from the destination (plain keys or A* keys) and
then walks forward from the origin, always taking the smallest
(node_id, edge_id) arc that lies on an optimal continuation.  The walk
tests float equality against the backward distances, which is exact
because the forward test replays the same additions the kernel did.

The A* heuristic is the great-circle distance scaled by (1 - 1e-6) and
lowered by 1e-6 m: strictly below every achievable cost by a margin
that dwarfs accumulated rounding, so both modes settle every node that
can appear on an optimal path and return bit-identical routes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from sidewalk_access import _kernels
from sidewalk_access.errors import (
    DisconnectedError,
    RoutingError,
    UnsnappableEndpointError,
)
from sidewalk_access.geo import Edge, GeoPoint, SidewalkGraph, nearest_node
from sidewalk_access.model import BarrierLabelType, Severity
from sidewalk_access.profiles import SHORTEST_PROFILE_ID, GroupProfile, shortest_profile

DEFAULT_ENDPOINT_SNAP_M = 100.0

_ASTAR_SCALE = 1.0 - 1e-6
_ASTAR_SLACK_M = 1e-6


@dataclass(frozen=True)
class RouteBarrier:
    edge_id: str
    label_id: str
    label_type: BarrierLabelType
    severity: Severity


@dataclass(frozen=True)
class Route:
    profile_id: str
    nodes: tuple[str, ...]
    edges: tuple[str, ...]
    length_m: float
    weighted_m: float
    barriers: tuple[RouteBarrier, ...]


def weighted_length(edge: Edge, profile: GroupProfile) -> float:
    """Metric length plus 0.1 * length per unit of summed label C."""
    s = 0.0
    for att in edge.labels:
        s += profile.c(att.label.label_type)
    return edge.length_m + (0.1 * edge.length_m) * s


class RoutingIndex:
    """Profile-independent CSR view of a graph, built once and reused.

    Node indices follow sorted node_id order, and each node's arcs are
    sorted by (neighbor, edge_id), which is what makes the forward walk
    produce the lexicographically smallest optimal path.
    """

    def __init__(self, graph: SidewalkGraph):
        self.graph = graph
        self.node_ids = sorted(graph.nodes)
        self.node_pos = {n: i for i, n in enumerate(self.node_ids)}
        self.lats = np.array(
            [graph.nodes[n].lat for n in self.node_ids], dtype=np.float64
        )
        self.lons = np.array(
            [graph.nodes[n].lon for n in self.node_ids], dtype=np.float64
        )
        self.edge_ids = sorted(graph.edges)
        edge_pos = {e: i for i, e in enumerate(self.edge_ids)}
        self.edge_lengths = np.array(
            [graph.edges[e].length_m for e in self.edge_ids], dtype=np.float64
        )
        adj = graph.adjacency()
        indptr = [0]
        indices: list[int] = []
        arc_edges: list[int] = []
        for node_id in self.node_ids:
            arcs = sorted(
                (self.node_pos[nbr], edge_pos[eid]) for nbr, eid in adj[node_id]
            )
            for v, e in arcs:
                indices.append(v)
                arc_edges.append(e)
            indptr.append(len(indices))
        self.indptr = np.array(indptr, dtype=np.int64)
        self.indices = np.array(indices, dtype=np.int64)
        self.arc_edges = np.array(arc_edges, dtype=np.int64)

    def edge_weights(self, profile: GroupProfile) -> np.ndarray:
        w = np.empty(len(self.edge_ids), dtype=np.float64)
        for i, eid in enumerate(self.edge_ids):
            w[i] = weighted_length(self.graph.edges[eid], profile)
        return w

    def heuristic_to(self, target: GeoPoint) -> np.ndarray:
        lat0 = math.radians(target.lat)
        lon0 = math.radians(target.lon)
        p1 = np.radians(self.lats)
        sp = np.sin((p1 - lat0) * 0.5)
        sl = np.sin((np.radians(self.lons) - lon0) * 0.5)
        a = np.minimum(sp * sp + np.cos(p1) * math.cos(lat0) * (sl * sl), 1.0)
        d = (2.0 * _kernels.EARTH_RADIUS_M) * np.arcsin(np.sqrt(a))
        return np.maximum(d * _ASTAR_SCALE - _ASTAR_SLACK_M, 0.0)


def _snap_endpoint(
    graph: SidewalkGraph, p: GeoPoint, which: str, snap_max_m: float
) -> str:
    node_id, dist = nearest_node(graph, p)
    if dist > snap_max_m:
        raise UnsnappableEndpointError(which, dist, snap_max_m)
    return node_id


def route(
    graph: SidewalkGraph,
    profile: GroupProfile,
    origin: GeoPoint,
    dest: GeoPoint,
    snap_max_m: float = DEFAULT_ENDPOINT_SNAP_M,
    algorithm: str = "astar",
    index: RoutingIndex | None = None,
) -> Route:
    """Minimum weighted-length path between two points.

    Endpoints snap to their nearest nodes within ``snap_max_m``.
    ``algorithm`` is "astar" or "dijkstra"; both return the identical
    route, the heap-only mode exists for differential testing.
    """
    if algorithm not in ("astar", "dijkstra"):
        raise RoutingError(f"unknown algorithm {algorithm!r}")
    if index is None:
        index = RoutingIndex(graph)
    o_node = _snap_endpoint(graph, origin, "origin", snap_max_m)
    d_node = _snap_endpoint(graph, dest, "destination", snap_max_m)
    if graph.components[o_node] != graph.components[d_node]:
        raise DisconnectedError(
            f"origin snaps to {o_node} (component {graph.components[o_node]}) but "
            f"destination snaps to {d_node} (component {graph.components[d_node]})"
        )
    if o_node == d_node:
        return Route(
            profile_id=profile.profile_id,
            nodes=(o_node,),
            edges=(),
            length_m=0.0,
            weighted_m=0.0,
            barriers=(),
        )

    o_idx = index.node_pos[o_node]
    d_idx = index.node_pos[d_node]
    edge_w = index.edge_weights(profile)
    arc_w = edge_w[index.arc_edges] if len(index.arc_edges) else np.empty(0)
    if algorithm == "astar":
        h = index.heuristic_to(graph.nodes[o_node])
    else:
        h = np.zeros(len(index.node_ids), dtype=np.float64)
    # backward pass: distances to the destination
    dist = _kernels.dijkstra_dist(index.indptr, index.indices, arc_w, h, d_idx, o_idx)
    dist_l = dist.tolist()
    if not math.isfinite(dist_l[o_idx]):
        raise DisconnectedError(f"no path between {o_node} and {d_node}")

    indptr = index.indptr.tolist()
    indices = index.indices.tolist()
    arc_edges = index.arc_edges.tolist()
    arc_wl = arc_w.tolist()

    node_path = [o_node]
    edge_path: list[str] = []
    visited = {o_idx}
    u = o_idx
    while u != d_idx:
        du = dist_l[u]
        nxt = -1
        nxt_arc = -1
        for arc in range(indptr[u], indptr[u + 1]):
            v = indices[arc]
            if dist_l[v] + arc_wl[arc] == du:
                nxt = v
                nxt_arc = arc
                break
        if nxt < 0 or nxt in visited:
            # cannot happen for finite positive weights; guard against a
            # silent infinite loop all the same
            raise RoutingError("optimal-path walk failed to make progress")
        visited.add(nxt)
        node_path.append(index.node_ids[nxt])
        edge_path.append(index.edge_ids[arc_edges[nxt_arc]])
        u = nxt

    # fold from the destination side, mirroring the relaxation order, so
    # the weighted total telescopes to dist[origin] bit for bit
    length_m = 0.0
    for eid in reversed(edge_path):
        length_m = graph.edges[eid].length_m + length_m
    weighted_m = dist_l[o_idx]

    barriers = []
    for eid in edge_path:
        for att in graph.edges[eid].labels:
            barriers.append(
                RouteBarrier(
                    edge_id=eid,
                    label_id=att.label.label_id,
                    label_type=att.label.label_type,
                    severity=att.label.severity,
                )
            )
    return Route(
        profile_id=profile.profile_id,
        nodes=tuple(node_path),
        edges=tuple(edge_path),
        length_m=length_m,
        weighted_m=weighted_m,
        barriers=tuple(barriers),
    )


def compare_routes(
    graph: SidewalkGraph,
    profiles: list[GroupProfile],
    origin: GeoPoint,
    dest: GeoPoint,
    snap_max_m: float = DEFAULT_ENDPOINT_SNAP_M,
    algorithm: str = "astar",
    index: RoutingIndex | None = None,
) -> list[Route]:
    """One route per profile plus the zero-confidence "shortest" baseline.

    The baseline is prepended unless the caller already included it; its
    route has the minimal metric length of all returned routes.
    """
    if index is None:
        index = RoutingIndex(graph)
    profs = list(profiles)
    if not any(p.profile_id == SHORTEST_PROFILE_ID for p in profs):
        profs.insert(0, shortest_profile())
    return [
        route(graph, p, origin, dest, snap_max_m, algorithm, index) for p in profs
    ]


def routes_to_geojson(graph: SidewalkGraph, routes: list[Route]) -> dict:
    """FeatureCollection with one LineString per route."""
    features = []
    for r in routes:
        if not r.edges:
            p = graph.nodes[r.nodes[0]]
            coords = [[p.lon, p.lat], [p.lon, p.lat]]
        else:
            coords = []
            for i, eid in enumerate(r.edges):
                edge = graph.edges[eid]
                pts = list(edge.polyline)
                if edge.node_a != r.nodes[i]:
                    pts.reverse()
                coords.extend(
                    [p.lon, p.lat] for p in (pts if i == 0 else pts[1:])
                )
        features.append(
            {
                "type": "Feature",
                "geometry": {"type": "LineString", "coordinates": coords},
                "properties": {
                    "profile_id": r.profile_id,
                    "length_m": r.length_m,
                    "weighted_m": r.weighted_m,
                    "origin_node": r.nodes[0],
                    "dest_node": r.nodes[-1],
                    "nodes": list(r.nodes),
                    "edges": list(r.edges),
                    "barriers": [
                        {
                            "edge_id": b.edge_id,
                            "label_id": b.label_id,
                            "label_type": b.label_type.value,
                            "severity": b.severity.value,
                        }
                        for b in r.barriers
                    ],
                },
            }
        )
    return {"type": "FeatureCollection", "features": features}
