"""Confidence profiles: per-group barrier weights for scoring/routing."""

from __future__ import annotations

import json
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

from sidewalk_access.analysis import ConfidenceTable
from sidewalk_access.errors import ProfileError
from sidewalk_access.model import CANONICAL_GROUPS, BarrierLabelType, MobilityAid

PROVENANCE_DERIVED = "derived"
PROVENANCE_CUSTOM = "custom"

#: Reserved id for the zero-confidence pseudo-profile used in route
#: comparisons; it always routes by plain metric length.
SHORTEST_PROFILE_ID = "shortest"


@dataclass(frozen=True)
class GroupProfile:
    profile_id: str
    group: str  # a MobilityAid value, or "custom"
    confidence: Mapping[BarrierLabelType, float]
    provenance: str = PROVENANCE_DERIVED
    base_profile_id: str | None = None

    def c(self, label_type: BarrierLabelType) -> float:
        return self.confidence[label_type]

    def to_json(self) -> dict:
        prov: dict = {"kind": self.provenance}
        if self.base_profile_id is not None:
            prov["base_profile_id"] = self.base_profile_id
        return {
            "profile_id": self.profile_id,
            "group": self.group,
            "confidence": {lt.value: self.confidence[lt] for lt in BarrierLabelType},
            "provenance": prov,
        }


def _check_confidence(conf: Mapping[BarrierLabelType, float], where: str) -> dict:
    out = {}
    for lt in BarrierLabelType:
        if lt not in conf:
            raise ProfileError(f"{where}: missing confidence for {lt.value!r}")
        c = conf[lt]
        if not isinstance(c, (int, float)) or isinstance(c, bool):
            raise ProfileError(f"{where}: confidence[{lt.value}] must be a number")
        c = float(c)
        if not 0.0 <= c <= 1.0:
            raise ProfileError(
                f"{where}: confidence[{lt.value}] = {c} outside [0, 1]"
            )
        out[lt] = c
    return out


def _freeze(conf: dict) -> Mapping[BarrierLabelType, float]:
    return MappingProxyType(dict(conf))


def build_profiles(table: ConfidenceTable) -> list[GroupProfile]:
    """One derived profile per canonical group, id = group name."""
    missing = [
        f"({g.value}, {lt.value})"
        for g in CANONICAL_GROUPS
        for lt in BarrierLabelType
        if (g, lt) not in table.cells
    ]
    if missing:
        raise ProfileError(f"confidence table is missing cells: {', '.join(missing)}")
    return [
        GroupProfile(
            profile_id=g.value,
            group=g.value,
            confidence=_freeze({lt: table.c(g, lt) for lt in BarrierLabelType}),
            provenance=PROVENANCE_DERIVED,
        )
        for g in CANONICAL_GROUPS
    ]


def shortest_profile() -> GroupProfile:
    return GroupProfile(
        profile_id=SHORTEST_PROFILE_ID,
        group="custom",
        confidence=_freeze({lt: 0.0 for lt in BarrierLabelType}),
        provenance=PROVENANCE_DERIVED,
    )


def customize_profile(
    base: GroupProfile,
    overrides: Mapping[BarrierLabelType, float],
    profile_id: str | None = None,
) -> GroupProfile:
    """New profile inheriting from ``base`` with some weights replaced."""
    conf = dict(base.confidence)
    for lt, c in overrides.items():
        if not isinstance(lt, BarrierLabelType):
            raise ProfileError(f"unknown barrier type {lt!r} in overrides")
        if not isinstance(c, (int, float)) or isinstance(c, bool):
            raise ProfileError(f"override for {lt.value!r} must be a number")
        c = float(c)
        if not 0.0 <= c <= 1.0:
            raise ProfileError(f"override {lt.value} = {c} outside [0, 1]")
        conf[lt] = c
    return GroupProfile(
        profile_id=profile_id or f"custom-{base.profile_id}",
        group="custom",
        confidence=_freeze(conf),
        provenance=PROVENANCE_CUSTOM,
        base_profile_id=base.profile_id,
    )


def save_profiles(profiles: list[GroupProfile]) -> str:
    from sidewalk_access.jsonio import canonical_dumps

    return canonical_dumps([p.to_json() for p in profiles])


def load_profiles(text: str) -> list[GroupProfile]:
    """Parse and validate a profile document (round-trip of save)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProfileError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, list):
        raise ProfileError("profile document must be a list of profiles")
    out = []
    seen: set[str] = set()
    valid_groups = {aid.value for aid in MobilityAid} | {"custom"}
    for i, raw in enumerate(doc):
        where = f"profiles[{i}]"
        if not isinstance(raw, dict):
            raise ProfileError(f"{where}: must be an object")
        profile_id = raw.get("profile_id")
        if not isinstance(profile_id, str) or not profile_id:
            raise ProfileError(f"{where}: profile_id must be a non-empty string")
        if profile_id in seen:
            raise ProfileError(f"{where}: duplicate profile_id {profile_id!r}")
        seen.add(profile_id)
        group = raw.get("group")
        if group not in valid_groups:
            raise ProfileError(f"{where}: unknown group {group!r}")
        raw_conf = raw.get("confidence")
        if not isinstance(raw_conf, dict):
            raise ProfileError(f"{where}: confidence must be an object")
        by_type = {}
        for key, val in raw_conf.items():
            try:
                lt = BarrierLabelType(key)
            except ValueError:
                raise ProfileError(
                    f"{where}: unknown barrier type {key!r}"
                ) from None
            by_type[lt] = val
        conf = _check_confidence(by_type, where)
        prov = raw.get("provenance", {"kind": PROVENANCE_DERIVED})
        if not isinstance(prov, dict) or prov.get("kind") not in (
            PROVENANCE_DERIVED,
            PROVENANCE_CUSTOM,
        ):
            raise ProfileError(f"{where}: provenance.kind must be derived or custom")
        base_id = prov.get("base_profile_id")
        if base_id is not None and not isinstance(base_id, str):
            raise ProfileError(f"{where}: provenance.base_profile_id must be a string")
        if prov["kind"] == PROVENANCE_DERIVED and base_id is not None:
            raise ProfileError(
                f"{where}: derived profiles cannot carry a base_profile_id"
            )
        out.append(
            GroupProfile(
                profile_id=profile_id,
                group=group,
                confidence=_freeze(conf),
                provenance=prov["kind"],
                base_profile_id=base_id,
            )
        )
    return out
