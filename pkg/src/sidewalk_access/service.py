"""HTTP service over a fixed graph + profile set.

The graph and the derived profiles are loaded once at startup and never
mutate; custom profiles live in an in-memory registry guarded by a lock.
Every response, errors included, carries the ``version`` hash of the
loaded artifacts so clients can detect a restart with different data.

Expected failures map to 4xx with the same machine-readable error record
the CLI prints; a 500 here means a bug, not bad input.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from sidewalk_access import __version__
from sidewalk_access._kernels import BACKEND
from sidewalk_access.errors import (
    ConfigError,
    DisconnectedError,
    GraphError,
    InterfaceError,
    SidewalkAccessError,
    UnknownProfileError,
    UnsnappableEndpointError,
)
from sidewalk_access.geo import GeoPoint, SidewalkGraph, _check_point, load_graph
from sidewalk_access.model import BarrierLabelType
from sidewalk_access.profiles import (
    SHORTEST_PROFILE_ID,
    GroupProfile,
    customize_profile,
    load_profiles,
    shortest_profile,
)
from sidewalk_access.routing import (
    DEFAULT_ENDPOINT_SNAP_M,
    RoutingIndex,
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


@dataclass(frozen=True)
class ServiceConfig:
    graph: str
    profiles: str
    host: str = "127.0.0.1"
    port: int = 8080
    neighborhoods: str | None = None
    percentile: float = DEFAULT_PERCENTILE
    endpoint_snap_m: float = DEFAULT_ENDPOINT_SNAP_M
    cors_allow_origins: tuple[str, ...] = ()
    static_dir: str | None = None


_CONFIG_KEYS = {
    "graph",
    "profiles",
    "host",
    "port",
    "neighborhoods",
    "percentile",
    "endpoint_snap_m",
    "cors_allow_origins",
    "static_dir",
}


def load_config(path: str) -> ServiceConfig:
    """Read a config file, resolving relative paths against its directory."""
    base = Path(path).resolve().parent
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(doc) - _CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    for key in ("graph", "profiles"):
        if not isinstance(doc.get(key), str) or not doc[key]:
            raise ConfigError(f"config needs a {key!r} path")

    def respath(value):
        return str((base / value).resolve()) if value is not None else None

    origins = doc.get("cors_allow_origins", [])
    if not isinstance(origins, list) or not all(isinstance(o, str) for o in origins):
        raise ConfigError("cors_allow_origins must be a list of origins")
    try:
        return ServiceConfig(
            graph=respath(doc["graph"]),
            profiles=respath(doc["profiles"]),
            host=str(doc.get("host", "127.0.0.1")),
            port=int(doc.get("port", 8080)),
            neighborhoods=respath(doc.get("neighborhoods")),
            percentile=float(doc.get("percentile", DEFAULT_PERCENTILE)),
            endpoint_snap_m=float(doc.get("endpoint_snap_m", DEFAULT_ENDPOINT_SNAP_M)),
            cors_allow_origins=tuple(origins),
            static_dir=respath(doc.get("static_dir")),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config value: {exc}") from None


@dataclass
class _AppState:
    graph: SidewalkGraph
    index: RoutingIndex
    version: str
    percentile: float
    endpoint_snap_m: float
    neighborhoods: list | None
    registry: dict[str, GroupProfile]
    file_order: tuple[str, ...]
    custom_order: list[str] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def get_profile(self, profile_id: str) -> GroupProfile:
        with self.lock:
            prof = self.registry.get(profile_id)
        if prof is None:
            if profile_id == SHORTEST_PROFILE_ID:
                return shortest_profile()
            raise UnknownProfileError(profile_id)
        return prof

    def list_profiles(self) -> list[GroupProfile]:
        with self.lock:
            order = list(self.file_order) + list(self.custom_order)
            return [self.registry[pid] for pid in order]

    def add_custom(self, prof: GroupProfile) -> None:
        with self.lock:
            if prof.profile_id in self.registry:
                raise InterfaceError(
                    f"profile_id {prof.profile_id!r} already exists",
                    path="$.profile_id",
                )
            self.registry[prof.profile_id] = prof
            self.custom_order.append(prof.profile_id)


def _version_hash(graph_text: str, profiles_text: str) -> str:
    h = hashlib.sha256()
    h.update(graph_text.encode("utf-8"))
    h.update(b"\x00")
    h.update(profiles_text.encode("utf-8"))
    return h.hexdigest()[:16]


def _parse_latlon(value: str, name: str) -> GeoPoint:
    parts = value.split(",")
    if len(parts) != 2:
        raise InterfaceError(f"{name} must be 'lat,lon', got {value!r}", path=f"$.{name}")
    try:
        lat = float(parts[0])
        lon = float(parts[1])
    except ValueError:
        raise InterfaceError(
            f"{name} must be 'lat,lon', got {value!r}", path=f"$.{name}"
        ) from None
    try:
        return _check_point(lat, lon, name)
    except GraphError as exc:
        raise InterfaceError(str(exc), path=f"$.{name}") from None


def _parse_custom_profile(state: _AppState, payload) -> GroupProfile:
    if not isinstance(payload, dict):
        raise InterfaceError("request body must be a JSON object")
    allowed = {"base_profile_id", "overrides", "profile_id"}
    unknown = sorted(set(payload) - allowed)
    if unknown:
        raise InterfaceError(f"unknown fields: {', '.join(unknown)}")
    base_id = payload.get("base_profile_id")
    if not isinstance(base_id, str) or not base_id:
        raise InterfaceError(
            "base_profile_id must be a profile id", path="$.base_profile_id"
        )
    base = state.get_profile(base_id)
    raw = payload.get("overrides")
    if not isinstance(raw, dict) or not raw:
        raise InterfaceError(
            "overrides must be a non-empty object", path="$.overrides"
        )
    overrides = {}
    for key, value in raw.items():
        try:
            lt = BarrierLabelType(key)
        except ValueError:
            raise InterfaceError(
                f"unknown barrier type {key!r}", path=f"$.overrides.{key}"
            ) from None
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise InterfaceError(
                f"confidence for {key} must be a number", path=f"$.overrides.{key}"
            )
        if not 0.0 <= float(value) <= 1.0:
            raise InterfaceError(
                f"confidence {value} outside [0, 1]", path=f"$.overrides.{key}"
            )
        overrides[lt] = float(value)
    profile_id = payload.get("profile_id")
    if profile_id is not None:
        if not isinstance(profile_id, str) or not profile_id:
            raise InterfaceError(
                "profile_id must be a non-empty string", path="$.profile_id"
            )
        if profile_id == SHORTEST_PROFILE_ID:
            raise InterfaceError(
                f"{SHORTEST_PROFILE_ID!r} is reserved", path="$.profile_id"
            )
    return customize_profile(base, overrides, profile_id)


def build_app(config: ServiceConfig) -> FastAPI:
    try:
        graph_text = Path(config.graph).read_text(encoding="utf-8")
        profiles_text = Path(config.profiles).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read data file: {exc}") from None
    graph = load_graph(graph_text)
    file_profiles = load_profiles(profiles_text)
    neighborhoods = None
    if config.neighborhoods is not None:
        try:
            nb_text = Path(config.neighborhoods).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read data file: {exc}") from None
        neighborhoods = parse_neighborhoods(nb_text)

    state = _AppState(
        graph=graph,
        index=RoutingIndex(graph),
        version=_version_hash(graph_text, profiles_text),
        percentile=config.percentile,
        endpoint_snap_m=config.endpoint_snap_m,
        neighborhoods=neighborhoods,
        registry={p.profile_id: p for p in file_profiles},
        file_order=tuple(p.profile_id for p in file_profiles),
    )

    app = FastAPI(title="sidewalk-access", version=__version__)

    if config.cors_allow_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(config.cors_allow_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(SidewalkAccessError)
    async def _engine_error(request: Request, exc: SidewalkAccessError):
        if isinstance(exc, UnknownProfileError):
            status = 404
        elif isinstance(exc, (UnsnappableEndpointError, DisconnectedError)):
            status = 422
        else:
            status = 400
        return JSONResponse(
            status_code=status,
            content={"error": exc.record(), "version": state.version},
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        loc = ".".join(str(part) for part in first.get("loc", ()))
        msg = first.get("msg", "invalid request")
        rec = {"module": "interface", "kind": "bad_request", "message": msg}
        if loc:
            rec["path"] = f"$.{loc}"
        return JSONResponse(
            status_code=400, content={"error": rec, "version": state.version}
        )

    @app.get("/health")
    def health():
        return {
            "status": "ok",
            "version": state.version,
            "backend": BACKEND,
            "nodes": len(state.graph.nodes),
            "edges": len(state.graph.edges),
        }

    @app.get("/profiles")
    def get_profiles():
        return {
            "version": state.version,
            "profiles": [p.to_json() for p in state.list_profiles()],
        }

    @app.post("/profiles")
    async def post_profile(request: Request):
        try:
            payload = json.loads(await request.body())
        except json.JSONDecodeError as exc:
            raise InterfaceError(f"request body is not valid JSON: {exc}") from None
        prof = _parse_custom_profile(state, payload)
        state.add_custom(prof)
        return {"version": state.version, "profile": prof.to_json()}

    @app.get("/scores")
    def get_scores(profile_id: str, level: str = "segment"):
        profile = state.get_profile(profile_id)
        if level not in ("segment", "neighborhood"):
            raise InterfaceError(
                f"level must be 'segment' or 'neighborhood', got {level!r}",
                path="$.level",
            )
        normalizer = compute_normalizer(state.graph, profile, state.percentile)
        if level == "segment":
            doc = segment_scores_geojson(state.graph, profile, normalizer)
        else:
            if state.neighborhoods is None:
                raise InterfaceError("service has no neighborhoods configured")
            doc = neighborhood_scores_geojson(
                state.graph, state.neighborhoods, profile, normalizer
            )
        doc["version"] = state.version
        return doc

    def _endpoints(request: Request) -> tuple[GeoPoint, GeoPoint]:
        # "from" is a keyword, so it cannot be a handler parameter name;
        # both routing endpoints read the pair straight off the request.
        params = request.query_params
        raw_from = params.get("from")
        raw_to = params.get("to")
        if raw_from is None:
            raise InterfaceError("missing query parameter 'from'", path="$.from")
        if raw_to is None:
            raise InterfaceError("missing query parameter 'to'", path="$.to")
        return _parse_latlon(raw_from, "from"), _parse_latlon(raw_to, "to")

    @app.get("/route")
    def get_route(request: Request, profile_id: str):
        origin, dest = _endpoints(request)
        r = compute_route(
            state.graph,
            state.get_profile(profile_id),
            origin,
            dest,
            snap_max_m=state.endpoint_snap_m,
            index=state.index,
        )
        doc = routes_to_geojson(state.graph, [r])
        doc["version"] = state.version
        return doc

    @app.get("/routes")
    def get_routes(request: Request, profile_ids: str):
        ids = [p for p in profile_ids.split(",") if p]
        if not ids:
            raise InterfaceError("profile_ids must list at least one profile")
        profiles = [state.get_profile(pid) for pid in ids]
        origin, dest = _endpoints(request)
        routes = compare_routes(
            state.graph,
            profiles,
            origin,
            dest,
            snap_max_m=state.endpoint_snap_m,
            index=state.index,
        )
        doc = routes_to_geojson(state.graph, routes)
        doc["version"] = state.version
        return doc

    if config.static_dir is not None:
        if not Path(config.static_dir).is_dir():
            raise ConfigError(f"static_dir is not a directory: {config.static_dir}")
        app.mount(
            "/", StaticFiles(directory=config.static_dir, html=True), name="ui"
        )

    return app
