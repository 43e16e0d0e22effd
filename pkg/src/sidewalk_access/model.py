"""Survey domain types and validated dataset ingestion.

The dataset document is JSON with top-level keys ``images``,
``respondents``, ``passability``, ``duels``, ``rankings``.  Enum values
are lowercase snake_case strings.  ``parse_survey_dataset`` is the only
entry point; everything it returns has passed referential-integrity
checks, so downstream code never revalidates.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

from sidewalk_access.errors import DatasetError


class MobilityAid(str, enum.Enum):
    WALKING_CANE = "walking_cane"
    WALKER = "walker"
    MOBILITY_SCOOTER = "mobility_scooter"
    MANUAL_WHEELCHAIR = "manual_wheelchair"
    MOTORIZED_WHEELCHAIR = "motorized_wheelchair"
    OTHER = "other"


#: The five groups used in aggregate analyses; "other" is parsed but
#: excluded unless explicitly requested.
CANONICAL_GROUPS = (
    MobilityAid.WALKING_CANE,
    MobilityAid.WALKER,
    MobilityAid.MOBILITY_SCOOTER,
    MobilityAid.MANUAL_WHEELCHAIR,
    MobilityAid.MOTORIZED_WHEELCHAIR,
)


class BarrierLabelType(str, enum.Enum):
    OBSTACLE = "obstacle"
    SURFACE_PROBLEM = "surface_problem"
    CURB_RAMP = "curb_ramp"
    MISSING_CURB_RAMP = "missing_curb_ramp"


class Severity(str, enum.Enum):
    LOW = "low"
    MID = "mid"
    HIGH = "high"


SEVERITY_ORDER = {Severity.LOW: 0, Severity.MID: 1, Severity.HIGH: 2}


class Subcategory(str, enum.Enum):
    FIRE_HYDRANT_POLE = "fire_hydrant_pole"
    VEGETATION = "vegetation"
    PARKED_VEHICLES = "parked_vehicles"
    CRACKS_HEIGHT_DIFF = "cracks_height_diff"
    BRICK_COBBLESTONE_PANELS = "brick_cobblestone_panels"
    SAND_GRAVEL_GRASS = "sand_gravel_grass"
    NARROW = "narrow"
    CURB_RAMP = "curb_ramp"
    MISSING_CURB_RAMP = "missing_curb_ramp"


#: Fixed subcategory -> top-level type mapping; documents violating it
#: are rejected at parse time.
SUBCATEGORY_LABEL_TYPE = {
    Subcategory.FIRE_HYDRANT_POLE: BarrierLabelType.OBSTACLE,
    Subcategory.VEGETATION: BarrierLabelType.OBSTACLE,
    Subcategory.PARKED_VEHICLES: BarrierLabelType.OBSTACLE,
    Subcategory.CRACKS_HEIGHT_DIFF: BarrierLabelType.SURFACE_PROBLEM,
    Subcategory.BRICK_COBBLESTONE_PANELS: BarrierLabelType.SURFACE_PROBLEM,
    Subcategory.SAND_GRAVEL_GRASS: BarrierLabelType.SURFACE_PROBLEM,
    Subcategory.NARROW: BarrierLabelType.SURFACE_PROBLEM,
    Subcategory.CURB_RAMP: BarrierLabelType.CURB_RAMP,
    Subcategory.MISSING_CURB_RAMP: BarrierLabelType.MISSING_CURB_RAMP,
}


class Vote(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNSURE = "unsure"


class DuelChoice(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    SAME = "same"


#: Part-3 ranking vocabulary, fixed length 9.  Distinct from the image
#: subcategories on purpose: the ranking question names barriers its own
#: way.
RANKING_ITEMS = (
    "missing_curb_ramp",
    "uneven_panels",
    "steep_slope",
    "broken_surface",
    "narrow_sidewalk",
    "sand_gravel",
    "grass_surface",
    "brick_cobblestone",
    "manhole_covers",
)


@dataclass(frozen=True)
class ImageMeta:
    image_id: str
    label_type: BarrierLabelType
    subcategory: Subcategory
    severity: Severity
    city: str | None = None


@dataclass(frozen=True)
class PassabilityRecord:
    respondent_id: str
    image_id: str
    vote: Vote


@dataclass(frozen=True)
class DuelRecord:
    respondent_id: str
    left: str
    right: str
    choice: DuelChoice


@dataclass(frozen=True)
class RankingRecord:
    respondent_id: str
    ordering: tuple[str, ...]  # most difficult first


@dataclass(frozen=True)
class SurveyDataset:
    images: tuple[ImageMeta, ...]
    respondents: dict[str, MobilityAid]
    passability: tuple[PassabilityRecord, ...]
    duels: tuple[DuelRecord, ...]
    rankings: tuple[RankingRecord, ...]
    # free-text descriptors for respondents whose aid is "other"
    other_descriptors: dict[str, str] = field(default_factory=dict)

    def image_index(self) -> dict[str, ImageMeta]:
        return {im.image_id: im for im in self.images}


def _want(obj, key, typ, path, typename):
    if not isinstance(obj, dict):
        raise DatasetError(f"expected an object, got {type(obj).__name__}", path=path)
    if key not in obj:
        raise DatasetError(f"missing required key '{key}'", path=path)
    val = obj[key]
    if not isinstance(val, typ) or (typ is not bool and isinstance(val, bool)):
        raise DatasetError(
            f"'{key}' must be {typename}, got {type(val).__name__}",
            path=f"{path}.{key}",
        )
    return val


def _enum(cls, raw, path):
    try:
        return cls(raw)
    except ValueError:
        allowed = ", ".join(m.value for m in cls)
        raise DatasetError(
            f"unknown value {raw!r}, expected one of: {allowed}", path=path
        ) from None


def parse_survey_dataset(text: str) -> SurveyDataset:
    """Parse and validate a survey dataset document.

    Raises DatasetError with the offending document path on any
    malformation, unknown enum value, duplicate id, or dangling
    reference.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DatasetError(f"not valid JSON: {exc}", path="$") from None
    if not isinstance(doc, dict):
        raise DatasetError("top level must be an object", path="$")
    for key in ("images", "respondents", "passability", "duels", "rankings"):
        if key not in doc:
            raise DatasetError(f"missing required key '{key}'", path="$")

    images = []
    seen_images: set[str] = set()
    raw_images = doc["images"]
    if not isinstance(raw_images, list):
        raise DatasetError("'images' must be a list", path="$.images")
    for i, raw in enumerate(raw_images):
        path = f"$.images[{i}]"
        image_id = _want(raw, "image_id", str, path, "a string")
        if image_id in seen_images:
            raise DatasetError(
                f"duplicate image_id {image_id!r}", path=f"{path}.image_id"
            )
        seen_images.add(image_id)
        subcategory = _enum(
            Subcategory,
            _want(raw, "subcategory", str, path, "a string"),
            f"{path}.subcategory",
        )
        label_type = _enum(
            BarrierLabelType,
            _want(raw, "label_type", str, path, "a string"),
            f"{path}.label_type",
        )
        if SUBCATEGORY_LABEL_TYPE[subcategory] is not label_type:
            raise DatasetError(
                f"subcategory {subcategory.value!r} belongs to label_type "
                f"{SUBCATEGORY_LABEL_TYPE[subcategory].value!r}, "
                f"got {label_type.value!r}",
                path=f"{path}.label_type",
            )
        severity = _enum(
            Severity,
            _want(raw, "severity", str, path, "a string"),
            f"{path}.severity",
        )
        city = raw.get("city")
        if city is not None and not isinstance(city, str):
            raise DatasetError("'city' must be a string", path=f"{path}.city")
        images.append(ImageMeta(image_id, label_type, subcategory, severity, city))

    respondents: dict[str, MobilityAid] = {}
    other_descriptors: dict[str, str] = {}
    raw_resp = doc["respondents"]
    if not isinstance(raw_resp, dict):
        raise DatasetError("'respondents' must be an object", path="$.respondents")
    for rid, raw in raw_resp.items():
        path = f"$.respondents.{rid}"
        if isinstance(raw, str):
            aid = _enum(MobilityAid, raw, path)
        elif isinstance(raw, dict):
            aid = _enum(MobilityAid, _want(raw, "aid", str, path, "a string"), f"{path}.aid")
            descriptor = raw.get("descriptor")
            if descriptor is not None:
                if not isinstance(descriptor, str):
                    raise DatasetError(
                        "'descriptor' must be a string", path=f"{path}.descriptor"
                    )
                if aid is not MobilityAid.OTHER:
                    raise DatasetError(
                        "descriptor is only allowed with aid 'other'",
                        path=f"{path}.descriptor",
                    )
                other_descriptors[rid] = descriptor
        else:
            raise DatasetError(
                "respondent entry must be an aid string or {aid, descriptor}",
                path=path,
            )
        respondents[rid] = aid

    image_lookup = {im.image_id: im for im in images}

    passability = []
    seen_votes: set[tuple[str, str]] = set()
    raw_pass = doc["passability"]
    if not isinstance(raw_pass, list):
        raise DatasetError("'passability' must be a list", path="$.passability")
    for i, raw in enumerate(raw_pass):
        path = f"$.passability[{i}]"
        rid = _want(raw, "respondent_id", str, path, "a string")
        image_id = _want(raw, "image_id", str, path, "a string")
        vote = _enum(Vote, _want(raw, "vote", str, path, "a string"), f"{path}.vote")
        if rid not in respondents:
            raise DatasetError(
                f"unknown respondent_id {rid!r}", path=f"{path}.respondent_id"
            )
        if image_id not in image_lookup:
            raise DatasetError(f"unknown image_id {image_id!r}", path=f"{path}.image_id")
        if (rid, image_id) in seen_votes:
            raise DatasetError(
                f"duplicate vote by {rid!r} on {image_id!r}", path=path
            )
        seen_votes.add((rid, image_id))
        passability.append(PassabilityRecord(rid, image_id, vote))

    duels = []
    raw_duels = doc["duels"]
    if not isinstance(raw_duels, list):
        raise DatasetError("'duels' must be a list", path="$.duels")
    for i, raw in enumerate(raw_duels):
        path = f"$.duels[{i}]"
        rid = _want(raw, "respondent_id", str, path, "a string")
        left = _want(raw, "left", str, path, "a string")
        right = _want(raw, "right", str, path, "a string")
        choice = _enum(
            DuelChoice, _want(raw, "choice", str, path, "a string"), f"{path}.choice"
        )
        if rid not in respondents:
            raise DatasetError(
                f"unknown respondent_id {rid!r}", path=f"{path}.respondent_id"
            )
        for side, image_id in (("left", left), ("right", right)):
            if image_id not in image_lookup:
                raise DatasetError(
                    f"unknown image_id {image_id!r}", path=f"{path}.{side}"
                )
        if left == right:
            raise DatasetError("left and right must differ", path=path)
        if image_lookup[left].subcategory is not image_lookup[right].subcategory:
            raise DatasetError(
                f"duel images {left!r} and {right!r} are from different "
                "subcategories",
                path=path,
            )
        duels.append(DuelRecord(rid, left, right, choice))

    rankings = []
    raw_rankings = doc["rankings"]
    if not isinstance(raw_rankings, list):
        raise DatasetError("'rankings' must be a list", path="$.rankings")
    expected = set(RANKING_ITEMS)
    for i, raw in enumerate(raw_rankings):
        path = f"$.rankings[{i}]"
        rid = _want(raw, "respondent_id", str, path, "a string")
        ordering = _want(raw, "ordering", list, path, "a list")
        if rid not in respondents:
            raise DatasetError(
                f"unknown respondent_id {rid!r}", path=f"{path}.respondent_id"
            )
        if not all(isinstance(x, str) for x in ordering) or sorted(ordering) != sorted(
            expected
        ):
            raise DatasetError(
                "ordering must be a permutation of the 9 barrier keys "
                f"({', '.join(RANKING_ITEMS)})",
                path=f"{path}.ordering",
            )
        rankings.append(RankingRecord(rid, tuple(ordering)))

    return SurveyDataset(
        images=tuple(images),
        respondents=respondents,
        passability=tuple(passability),
        duels=tuple(duels),
        rankings=tuple(rankings),
        other_descriptors=other_descriptors,
    )


def partition_image_sets(dataset: SurveyDataset) -> dict[Subcategory, list[ImageMeta]]:
    """Group images by subcategory.

    Always returns all nine keys; sets are sorted by image_id so the
    result is independent of document order.
    """
    out: dict[Subcategory, list[ImageMeta]] = {sc: [] for sc in Subcategory}
    for im in dataset.images:
        out[im.subcategory].append(im)
    for sc in out:
        out[sc].sort(key=lambda im: im.image_id)
    return out
