"""Sidewalk graph: geometry ingestion, node merging, label snapping.

Coordinates are WGS84 degrees.  Great-circle math goes through the
kernel haversine; snapping works in a single equirectangular projection
anchored at the mean node latitude, which is accurate to centimeters at
snap scale and keeps the grid index and the brute-force scan working on
the same numbers.
"""

from __future__ import annotations

import hashlib
import json
import math
from collections import defaultdict
from dataclasses import dataclass, replace
from typing import Iterable, Mapping

import numpy as np

from sidewalk_access import _kernels
from sidewalk_access.errors import GraphError
from sidewalk_access.model import BarrierLabelType, Severity

EARTH_RADIUS_M = _kernels.EARTH_RADIUS_M

DEFAULT_MERGE_EPS_M = 0.5
DEFAULT_SNAP_MAX_M = 20.0

EDGE_KINDS = ("sidewalk", "crossing")

#: Which edge kind may host each label type.
ADMISSIBLE_KIND = {
    BarrierLabelType.OBSTACLE: "sidewalk",
    BarrierLabelType.SURFACE_PROBLEM: "sidewalk",
    BarrierLabelType.CURB_RAMP: "crossing",
    BarrierLabelType.MISSING_CURB_RAMP: "crossing",
}


@dataclass(frozen=True)
class GeoPoint:
    lat: float
    lon: float


def _check_point(lat, lon, where: str) -> GeoPoint:
    for name, val, bound in (("lat", lat, 90.0), ("lon", lon, 180.0)):
        if not isinstance(val, (int, float)) or isinstance(val, bool):
            raise GraphError(f"{where}: {name} must be a number")
        if not math.isfinite(val) or abs(val) > bound:
            raise GraphError(f"{where}: {name} = {val} out of range")
    return GeoPoint(float(lat), float(lon))


@dataclass(frozen=True)
class LabelPoint:
    label_id: str
    label_type: BarrierLabelType
    severity: Severity
    position: GeoPoint
    severity_raw: int | None = None


@dataclass(frozen=True)
class AttachedLabel:
    label: LabelPoint
    edge_id: str
    snap_m: float


@dataclass(frozen=True)
class UnsnappedLabel:
    label: LabelPoint
    # distance to the closest admissible edge, None when the graph has
    # no edge of the admissible kind at all
    nearest_m: float | None


@dataclass(frozen=True)
class Edge:
    edge_id: str
    kind: str
    polyline: tuple[GeoPoint, ...]
    length_m: float
    node_a: str
    node_b: str
    labels: tuple[AttachedLabel, ...] = ()


@dataclass(frozen=True)
class SidewalkGraph:
    nodes: Mapping[str, GeoPoint]
    components: Mapping[str, int]
    edges: Mapping[str, Edge]
    merge_eps_m: float
    snap_max_m: float | None = None
    unsnapped: tuple[UnsnappedLabel, ...] = ()

    def adjacency(self) -> dict[str, list[tuple[str, str]]]:
        """node_id -> sorted (neighbor, edge_id) pairs.  Self-loops are
        kept out: with positive weights they can never improve a path."""
        adj: dict[str, list[tuple[str, str]]] = {n: [] for n in self.nodes}
        for edge in self.edges.values():
            if edge.node_a == edge.node_b:
                continue
            adj[edge.node_a].append((edge.node_b, edge.edge_id))
            adj[edge.node_b].append((edge.node_a, edge.edge_id))
        for n in adj:
            adj[n].sort()
        return adj

    def ref_lat(self) -> float:
        if not self.nodes:
            raise GraphError("empty graph has no reference latitude")
        return math.fsum(p.lat for p in self.nodes.values()) / len(self.nodes)


def haversine_m(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance in meters (sphere radius 6,371,008.8 m)."""
    return _kernels.haversine_m(a.lat, a.lon, b.lat, b.lon)


def polyline_length_m(points: Iterable[GeoPoint]) -> float:
    pts = list(points)
    return math.fsum(haversine_m(pts[i], pts[i + 1]) for i in range(len(pts) - 1))


def severity_from_raw(raw: int) -> Severity:
    """Five-point crowdsourced severity folded to three: 1-2 low, 3 mid,
    4-5 high."""
    if raw in (1, 2):
        return Severity.LOW
    if raw == 3:
        return Severity.MID
    if raw in (4, 5):
        return Severity.HIGH
    raise GraphError(f"severity must be an integer 1..5, got {raw!r}")


def parse_labels(text: str) -> list[LabelPoint]:
    """Parse a crowdsourced label export: a JSON list of
    {label_id, label_type, severity (1-5), lat, lng}."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"labels document is not valid JSON: {exc}") from None
    if isinstance(doc, dict) and isinstance(doc.get("labels"), list):
        doc = doc["labels"]
    if not isinstance(doc, list):
        raise GraphError("labels document must be a list of label records")
    out = []
    seen: set[str] = set()
    for i, raw in enumerate(doc):
        where = f"labels[{i}]"
        if not isinstance(raw, dict):
            raise GraphError(f"{where}: must be an object")
        label_id = raw.get("label_id")
        if not isinstance(label_id, str) or not label_id:
            raise GraphError(f"{where}: label_id must be a non-empty string")
        if label_id in seen:
            raise GraphError(f"{where}: duplicate label_id {label_id!r}")
        seen.add(label_id)
        try:
            label_type = BarrierLabelType(raw.get("label_type"))
        except ValueError:
            raise GraphError(
                f"{where}: unknown label_type {raw.get('label_type')!r}"
            ) from None
        raw_sev = raw.get("severity")
        if not isinstance(raw_sev, int) or isinstance(raw_sev, bool):
            raise GraphError(f"{where}: severity must be an integer 1..5")
        severity = severity_from_raw(raw_sev)
        pos = _check_point(raw.get("lat"), raw.get("lng"), where)
        out.append(LabelPoint(label_id, label_type, severity, pos, raw_sev))
    return out


def _edge_content_id(kind: str, polyline: tuple[GeoPoint, ...]) -> str:
    text = kind + "|" + ";".join(f"{p.lat!r},{p.lon!r}" for p in polyline)
    return "e" + hashlib.sha1(text.encode("ascii")).hexdigest()[:12]


def _parse_geometry(text: str) -> list[tuple[str, tuple[GeoPoint, ...], str | None]]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"geometry document is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise GraphError("geometry document must be a FeatureCollection")
    features = doc.get("features")
    if not isinstance(features, list):
        raise GraphError("FeatureCollection without a features list")
    out = []
    for i, feat in enumerate(features):
        where = f"features[{i}]"
        if not isinstance(feat, dict) or feat.get("type") != "Feature":
            raise GraphError(f"{where}: expected a Feature object")
        geom = feat.get("geometry")
        if not isinstance(geom, dict) or geom.get("type") != "LineString":
            raise GraphError(f"{where}: geometry must be a LineString")
        coords = geom.get("coordinates")
        if not isinstance(coords, list) or len(coords) < 2:
            raise GraphError(f"{where}: LineString needs at least 2 coordinates")
        props = feat.get("properties") or {}
        kind = props.get("kind")
        if kind not in EDGE_KINDS:
            raise GraphError(
                f"{where}: property 'kind' must be one of {EDGE_KINDS}, got {kind!r}"
            )
        pts = []
        for j, pair in enumerate(coords):
            if not isinstance(pair, list) or len(pair) != 2:
                raise GraphError(f"{where}: coordinate {j} must be [lon, lat]")
            pts.append(_check_point(pair[1], pair[0], f"{where}.coordinates[{j}]"))
        explicit = props.get("id")
        if explicit is not None and (not isinstance(explicit, str) or not explicit):
            raise GraphError(f"{where}: property 'id' must be a non-empty string")
        out.append((kind, tuple(pts), explicit))
    return out


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def build_graph(geometry_text: str, merge_eps_m: float = DEFAULT_MERGE_EPS_M) -> SidewalkGraph:
    """Build a routable graph from sidewalk/crossing polylines.

    Polyline endpoints closer than ``merge_eps_m`` (great-circle) are
    unified into one node; the result is deterministic and independent
    of feature order.
    """
    if merge_eps_m < 0:
        raise GraphError(f"merge_eps_m must be >= 0, got {merge_eps_m}")
    features = _parse_geometry(geometry_text)
    if not features:
        raise GraphError("geometry document has no features")

    # order features canonically so ids and nodes never depend on
    # document order
    keyed = []
    seen_ids: dict[str, int] = {}
    for kind, pts, explicit in features:
        edge_id = explicit if explicit is not None else _edge_content_id(kind, pts)
        if edge_id in seen_ids:
            raise GraphError(f"duplicate edge id {edge_id!r} (identical feature?)")
        seen_ids[edge_id] = 1
        length = polyline_length_m(pts)
        if length <= 0.0:
            raise GraphError(f"feature {edge_id!r} has zero length")
        keyed.append((edge_id, kind, pts, length))
    keyed.sort(key=lambda k: k[0])

    endpoints: list[GeoPoint] = []
    for _, _, pts, _ in keyed:
        endpoints.append(pts[0])
        endpoints.append(pts[-1])

    uf = _UnionFind(len(endpoints))
    if merge_eps_m == 0.0:
        exact: dict[tuple[float, float], int] = {}
        for i, p in enumerate(endpoints):
            key = (p.lat, p.lon)
            if key in exact:
                uf.union(exact[key], i)
            else:
                exact[key] = i
    else:
        ref = math.fsum(p.lat for p in endpoints) / len(endpoints)
        kx = EARTH_RADIUS_M * math.cos(math.radians(ref))
        cell_m = 2.0 * merge_eps_m
        grid: dict[tuple[int, int], list[int]] = defaultdict(list)
        for i, p in enumerate(endpoints):
            x = math.radians(p.lon) * kx
            y = math.radians(p.lat) * EARTH_RADIUS_M
            cx, cy = math.floor(x / cell_m), math.floor(y / cell_m)
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    for j in grid.get((cx + dx, cy + dy), ()):
                        q = endpoints[j]
                        if _kernels.haversine_m(p.lat, p.lon, q.lat, q.lon) <= merge_eps_m:
                            uf.union(i, j)
            grid[(cx, cy)].append(i)

    members: dict[int, list[int]] = defaultdict(list)
    for i in range(len(endpoints)):
        members[uf.find(i)].append(i)
    # representative coordinate: smallest (lat, lon) in the cluster;
    # a centroid would depend on summation order
    rep_point: dict[int, GeoPoint] = {}
    for root, idxs in members.items():
        rep_point[root] = min(
            (endpoints[i] for i in idxs), key=lambda p: (p.lat, p.lon)
        )
    roots_sorted = sorted(members, key=lambda r: (rep_point[r].lat, rep_point[r].lon))
    node_id_of_root = {root: f"n{i:05d}" for i, root in enumerate(roots_sorted)}
    nodes = {node_id_of_root[r]: rep_point[r] for r in roots_sorted}

    edges: dict[str, Edge] = {}
    for f_idx, (edge_id, kind, pts, length) in enumerate(keyed):
        a = node_id_of_root[uf.find(2 * f_idx)]
        b = node_id_of_root[uf.find(2 * f_idx + 1)]
        edges[edge_id] = Edge(
            edge_id=edge_id,
            kind=kind,
            polyline=pts,
            length_m=length,
            node_a=a,
            node_b=b,
        )

    components = _assign_components(nodes, edges)
    return SidewalkGraph(
        nodes=nodes,
        components=components,
        edges=edges,
        merge_eps_m=float(merge_eps_m),
    )


def _assign_components(
    nodes: Mapping[str, GeoPoint], edges: Mapping[str, Edge]
) -> dict[str, int]:
    adj: dict[str, list[str]] = {n: [] for n in nodes}
    for e in edges.values():
        adj[e.node_a].append(e.node_b)
        adj[e.node_b].append(e.node_a)
    comp: dict[str, int] = {}
    next_id = 0
    for start in sorted(nodes):
        if start in comp:
            continue
        stack = [start]
        comp[start] = next_id
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in comp:
                    comp[v] = next_id
                    stack.append(v)
        next_id += 1
    return comp


@dataclass(frozen=True)
class _SegmentTable:
    """Flat per-kind arrays of polyline segments in projected meters."""

    edge_ids: list[str]
    ax: np.ndarray
    ay: np.ndarray
    bx: np.ndarray
    by: np.ndarray
    grid: dict[tuple[int, int], list[int]]
    cell_m: float


def _project_xy(lats, lons, kx: float):
    x = np.radians(np.asarray(lons, dtype=np.float64)) * kx
    y = np.radians(np.asarray(lats, dtype=np.float64)) * EARTH_RADIUS_M
    return x, y


def _segment_tables(graph: SidewalkGraph, max_snap_m: float):
    ref = graph.ref_lat()
    kx = EARTH_RADIUS_M * math.cos(math.radians(ref))
    cell_m = 2.0 * max_snap_m if max_snap_m > 0 else 1.0
    tables: dict[str, _SegmentTable] = {}
    for kind in EDGE_KINDS:
        edge_ids: list[str] = []
        pa_lat: list[float] = []
        pa_lon: list[float] = []
        pb_lat: list[float] = []
        pb_lon: list[float] = []
        for edge_id in sorted(graph.edges):
            edge = graph.edges[edge_id]
            if edge.kind != kind:
                continue
            for i in range(len(edge.polyline) - 1):
                p, q = edge.polyline[i], edge.polyline[i + 1]
                edge_ids.append(edge_id)
                pa_lat.append(p.lat)
                pa_lon.append(p.lon)
                pb_lat.append(q.lat)
                pb_lon.append(q.lon)
        ax, ay = _project_xy(pa_lat, pa_lon, kx)
        bx, by = _project_xy(pb_lat, pb_lon, kx)
        grid: dict[tuple[int, int], list[int]] = defaultdict(list)
        for i in range(len(edge_ids)):
            x0, x1 = sorted((ax[i], bx[i]))
            y0, y1 = sorted((ay[i], by[i]))
            for cx in range(math.floor(x0 / cell_m), math.floor(x1 / cell_m) + 1):
                for cy in range(math.floor(y0 / cell_m), math.floor(y1 / cell_m) + 1):
                    grid[(cx, cy)].append(i)
        tables[kind] = _SegmentTable(edge_ids, ax, ay, bx, by, dict(grid), cell_m)
    return tables, ref, kx


def _nearest_on_table(
    table: _SegmentTable, px: float, py: float, use_grid: bool
) -> tuple[int, float]:
    """(global segment index, distance in m); (-1, inf) when empty."""
    if not table.edge_ids:
        return -1, math.inf
    if use_grid:
        ccx, ccy = math.floor(px / table.cell_m), math.floor(py / table.cell_m)
        cand: set[int] = set()
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                cand.update(table.grid.get((ccx + dx, ccy + dy), ()))
        if not cand:
            return -1, math.inf
        idx = np.array(sorted(cand), dtype=np.intp)
        sub_i, d2, _ = _kernels.nearest_segment(
            px, py, table.ax[idx], table.ay[idx], table.bx[idx], table.by[idx]
        )
        return int(idx[sub_i]), math.sqrt(d2)
    i, d2, _ = _kernels.nearest_segment(px, py, table.ax, table.ay, table.bx, table.by)
    return i, math.sqrt(d2)


def snap_labels(
    graph: SidewalkGraph,
    labels: Iterable[LabelPoint],
    max_snap_m: float = DEFAULT_SNAP_MAX_M,
    use_grid: bool = True,
) -> SidewalkGraph:
    """Attach labels to the nearest edge of admissible kind.

    Obstacles and surface problems snap to sidewalk edges, curb-ramp
    family labels to crossing edges.  Labels farther than
    ``max_snap_m`` from every admissible edge land in the unsnapped
    report with their nearest distance.  ``use_grid=False`` forces the
    brute-force scan; results are identical by construction.
    """
    if max_snap_m < 0:
        raise GraphError(f"max_snap_m must be >= 0, got {max_snap_m}")
    tables, ref, kx = _segment_tables(graph, max_snap_m)

    attached: dict[str, list[AttachedLabel]] = defaultdict(list)
    unsnapped: list[UnsnappedLabel] = []
    for label in sorted(labels, key=lambda l: l.label_id):
        kind = ADMISSIBLE_KIND[label.label_type]
        table = tables[kind]
        px = math.radians(label.position.lon) * kx
        py = math.radians(label.position.lat) * EARTH_RADIUS_M
        idx, dist = _nearest_on_table(table, px, py, use_grid)
        if idx >= 0 and dist <= max_snap_m:
            attached[table.edge_ids[idx]].append(
                AttachedLabel(label=label, edge_id=table.edge_ids[idx], snap_m=dist)
            )
            continue
        # grid came up empty or too far: brute-force for the report
        if use_grid:
            idx, dist = _nearest_on_table(table, px, py, use_grid=False)
            if idx >= 0 and dist <= max_snap_m:
                # cell sizing makes this unreachable, but never let the
                # fast path drop a label the full scan would attach
                attached[table.edge_ids[idx]].append(
                    AttachedLabel(
                        label=label, edge_id=table.edge_ids[idx], snap_m=dist
                    )
                )
                continue
        unsnapped.append(
            UnsnappedLabel(label=label, nearest_m=dist if idx >= 0 else None)
        )

    new_edges = {}
    for edge_id, edge in graph.edges.items():
        atts = tuple(sorted(attached.get(edge_id, ()), key=lambda a: a.label.label_id))
        new_edges[edge_id] = replace(edge, labels=atts)
    return replace(
        graph,
        edges=new_edges,
        snap_max_m=float(max_snap_m),
        unsnapped=tuple(unsnapped),
    )


def nearest_node(graph: SidewalkGraph, p: GeoPoint) -> tuple[str, float]:
    """Globally nearest node by great-circle distance; ties take the
    smaller node_id."""
    if not graph.nodes:
        raise GraphError("nearest_node on an empty graph")
    best_id = None
    best_d = math.inf
    for node_id in sorted(graph.nodes):
        q = graph.nodes[node_id]
        d = _kernels.haversine_m(p.lat, p.lon, q.lat, q.lon)
        if d < best_d:
            best_d = d
            best_id = node_id
    return best_id, best_d


def _label_json(label: LabelPoint) -> dict:
    out = {
        "label_id": label.label_id,
        "label_type": label.label_type.value,
        "severity": label.severity.value,
        "lat": label.position.lat,
        "lng": label.position.lon,
    }
    if label.severity_raw is not None:
        out["severity_raw"] = label.severity_raw
    return out


def graph_to_json(graph: SidewalkGraph) -> dict:
    doc: dict = {
        "schema": "sidewalk-graph/1",
        "meta": {"merge_eps_m": graph.merge_eps_m},
        "nodes": {
            node_id: {
                "lat": p.lat,
                "lon": p.lon,
                "component": graph.components[node_id],
            }
            for node_id, p in graph.nodes.items()
        },
        "edges": {},
        "unsnapped": [],
    }
    if graph.snap_max_m is not None:
        doc["meta"]["snap_max_m"] = graph.snap_max_m
    for edge_id in sorted(graph.edges):
        edge = graph.edges[edge_id]
        doc["edges"][edge_id] = {
            "kind": edge.kind,
            "length_m": edge.length_m,
            "nodes": [edge.node_a, edge.node_b],
            # coordinate order: lon, lat
            "polyline": [[p.lon, p.lat] for p in edge.polyline],
            "labels": [
                dict(_label_json(a.label), snap_m=a.snap_m) for a in edge.labels
            ],
        }
    for u in graph.unsnapped:
        rec = _label_json(u.label)
        if u.nearest_m is not None:
            rec["nearest_m"] = u.nearest_m
        doc["unsnapped"].append(rec)
    return doc


def _label_from_json(raw: dict, where: str) -> LabelPoint:
    try:
        label_type = BarrierLabelType(raw["label_type"])
        severity = Severity(raw["severity"])
    except (KeyError, ValueError) as exc:
        raise GraphError(f"{where}: bad label record ({exc})") from None
    return LabelPoint(
        label_id=raw["label_id"],
        label_type=label_type,
        severity=severity,
        position=_check_point(raw.get("lat"), raw.get("lng"), where),
        severity_raw=raw.get("severity_raw"),
    )


def graph_from_json(doc: dict) -> SidewalkGraph:
    if not isinstance(doc, dict) or doc.get("schema") != "sidewalk-graph/1":
        raise GraphError("not a sidewalk-graph/1 document")
    meta = doc.get("meta", {})
    nodes: dict[str, GeoPoint] = {}
    components: dict[str, int] = {}
    for node_id, raw in doc.get("nodes", {}).items():
        nodes[node_id] = _check_point(
            raw.get("lat"), raw.get("lon"), f"nodes.{node_id}"
        )
        components[node_id] = int(raw["component"])
    edges: dict[str, Edge] = {}
    for edge_id, raw in doc.get("edges", {}).items():
        where = f"edges.{edge_id}"
        if raw.get("kind") not in EDGE_KINDS:
            raise GraphError(f"{where}: bad kind {raw.get('kind')!r}")
        pts = tuple(
            _check_point(pair[1], pair[0], f"{where}.polyline[{i}]")
            for i, pair in enumerate(raw.get("polyline", []))
        )
        if len(pts) < 2:
            raise GraphError(f"{where}: polyline needs at least 2 points")
        a, b = raw.get("nodes", (None, None))
        if a not in nodes or b not in nodes:
            raise GraphError(f"{where}: endpoint nodes not in graph")
        labels = []
        for j, lraw in enumerate(raw.get("labels", [])):
            lp = _label_from_json(lraw, f"{where}.labels[{j}]")
            labels.append(
                AttachedLabel(label=lp, edge_id=edge_id, snap_m=float(lraw["snap_m"]))
            )
        edges[edge_id] = Edge(
            edge_id=edge_id,
            kind=raw["kind"],
            polyline=pts,
            length_m=float(raw["length_m"]),
            node_a=a,
            node_b=b,
            labels=tuple(labels),
        )
    unsnapped = []
    for j, raw in enumerate(doc.get("unsnapped", [])):
        lp = _label_from_json(raw, f"unsnapped[{j}]")
        nearest = raw.get("nearest_m")
        unsnapped.append(
            UnsnappedLabel(label=lp, nearest_m=float(nearest) if nearest is not None else None)
        )
    return SidewalkGraph(
        nodes=nodes,
        components=components,
        edges=edges,
        merge_eps_m=float(meta.get("merge_eps_m", DEFAULT_MERGE_EPS_M)),
        snap_max_m=meta.get("snap_max_m"),
        unsnapped=tuple(unsnapped),
    )


def save_graph(graph: SidewalkGraph) -> str:
    from sidewalk_access.jsonio import canonical_dumps

    return canonical_dumps(graph_to_json(graph))


def load_graph(text: str) -> SidewalkGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"graph document is not valid JSON: {exc}") from None
    return graph_from_json(doc)
