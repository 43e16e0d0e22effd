"""Exception types shared across the engine.

Every error carries the name of the subsystem that raised it and a stable
``kind`` tag so the CLI and HTTP layers can emit machine-readable records.
"""

from __future__ import annotations


class SidewalkAccessError(Exception):
    """Base class for all engine errors."""

    module = "core"
    kind = "error"

    def __init__(self, message: str, *, path: str | None = None):
        super().__init__(message)
        self.path = path

    def record(self) -> dict:
        rec = {"module": self.module, "kind": self.kind, "message": str(self)}
        if self.path is not None:
            rec["path"] = self.path
        return rec


class DatasetError(SidewalkAccessError):
    """Survey dataset document is malformed or violates an invariant."""

    module = "survey"
    kind = "invalid_dataset"


class AnalysisError(SidewalkAccessError):
    module = "analysis"
    kind = "invalid_input"


class RankingSizeError(AnalysisError):
    """Consensus ranking requested outside the exact-solver size range."""

    kind = "size"


class ProfileError(SidewalkAccessError):
    module = "profiles"
    kind = "invalid_profile"


class UnknownProfileError(ProfileError):
    kind = "unknown_profile"

    def __init__(self, profile_id: str):
        super().__init__(f"unknown profile_id {profile_id!r}")
        self.profile_id = profile_id


class GraphError(SidewalkAccessError):
    module = "graph"
    kind = "invalid_geometry"


class ScoringError(SidewalkAccessError):
    module = "scoring"
    kind = "invalid_input"


class RoutingError(SidewalkAccessError):
    module = "routing"
    kind = "routing"


class UnsnappableEndpointError(RoutingError):
    """Origin or destination is too far from every graph node."""

    kind = "unsnappable"

    def __init__(self, which: str, distance_m: float, max_m: float):
        super().__init__(
            f"{which} is {distance_m:.1f} m from the nearest node "
            f"(limit {max_m:.1f} m)"
        )
        self.which = which
        self.distance_m = distance_m
        self.max_m = max_m


class DisconnectedError(RoutingError):
    """Snapped endpoints lie in different connected components."""

    kind = "disconnected"


class InterfaceError(SidewalkAccessError):
    """Malformed request at the CLI or HTTP boundary."""

    module = "interface"
    kind = "bad_request"


class ConfigError(SidewalkAccessError):
    """Service configuration file is unusable."""

    module = "service"
    kind = "config"
