import json

import pytest

from sidewalk_access.errors import DatasetError
from sidewalk_access.model import (
    CANONICAL_GROUPS,
    RANKING_ITEMS,
    MobilityAid,
    Subcategory,
    Vote,
    parse_survey_dataset,
    partition_image_sets,
)


def minimal_doc():
    return {
        "images": [
            {
                "image_id": "i1",
                "subcategory": "missing_curb_ramp",
                "label_type": "missing_curb_ramp",
                "severity": "high",
            },
            {
                "image_id": "i2",
                "subcategory": "missing_curb_ramp",
                "label_type": "missing_curb_ramp",
                "severity": "low",
            },
            {
                "image_id": "i3",
                "subcategory": "narrow",
                "label_type": "surface_problem",
                "severity": "mid",
            },
        ],
        "respondents": {
            "r1": "walking_cane",
            "r2": {"aid": "other", "descriptor": "crutches"},
        },
        "passability": [
            {"respondent_id": "r1", "image_id": "i1", "vote": "no"},
            {"respondent_id": "r1", "image_id": "i2", "vote": "yes"},
            {"respondent_id": "r2", "image_id": "i1", "vote": "unsure"},
        ],
        "duels": [
            {"respondent_id": "r1", "left": "i1", "right": "i2", "choice": "left"},
        ],
        "rankings": [
            {"respondent_id": "r1", "ordering": list(RANKING_ITEMS)},
        ],
    }


def parse(doc):
    return parse_survey_dataset(json.dumps(doc))


def test_parse_minimal_roundtrip():
    ds = parse(minimal_doc())
    assert len(ds.images) == 3
    assert ds.respondents["r1"] is MobilityAid.WALKING_CANE
    assert ds.respondents["r2"] is MobilityAid.OTHER
    assert ds.other_descriptors == {"r2": "crutches"}
    assert ds.passability[0].vote is Vote.NO
    assert ds.duels[0].left == "i1"
    assert ds.rankings[0].ordering == RANKING_ITEMS
    assert ds.image_index()["i3"].subcategory is Subcategory.NARROW


def test_canonical_groups_exclude_other():
    assert MobilityAid.OTHER not in CANONICAL_GROUPS
    assert len(CANONICAL_GROUPS) == 5


def path_of(doc):
    with pytest.raises(DatasetError) as ei:
        parse(doc)
    return ei.value.path, str(ei.value)


def test_not_json():
    with pytest.raises(DatasetError) as ei:
        parse_survey_dataset("{nope")
    assert ei.value.path == "$"


def test_missing_top_key():
    doc = minimal_doc()
    del doc["duels"]
    path, msg = path_of(doc)
    assert path == "$" and "duels" in msg


def test_duplicate_image_id():
    doc = minimal_doc()
    doc["images"].append(dict(doc["images"][0]))
    path, _ = path_of(doc)
    assert path == "$.images[3].image_id"


def test_subcategory_type_mismatch():
    doc = minimal_doc()
    doc["images"][2]["label_type"] = "obstacle"
    path, msg = path_of(doc)
    assert path == "$.images[2].label_type"
    assert "narrow" in msg


def test_unknown_enum_value():
    doc = minimal_doc()
    doc["passability"][0]["vote"] = "maybe"
    path, msg = path_of(doc)
    assert path == "$.passability[0].vote"
    assert "yes" in msg  # message lists the alternatives


def test_descriptor_requires_other():
    doc = minimal_doc()
    doc["respondents"]["r1"] = {"aid": "walker", "descriptor": "x"}
    path, _ = path_of(doc)
    assert path == "$.respondents.r1.descriptor"


def test_unknown_respondent_in_vote():
    doc = minimal_doc()
    doc["passability"].append({"respondent_id": "ghost", "image_id": "i1", "vote": "yes"})
    path, _ = path_of(doc)
    assert path == "$.passability[3].respondent_id"


def test_duplicate_vote_rejected():
    doc = minimal_doc()
    doc["passability"].append({"respondent_id": "r1", "image_id": "i1", "vote": "yes"})
    path, _ = path_of(doc)
    assert path == "$.passability[3]"


def test_duel_same_image():
    doc = minimal_doc()
    doc["duels"][0]["right"] = "i1"
    path, msg = path_of(doc)
    assert path == "$.duels[0]" and "differ" in msg


def test_duel_cross_subcategory():
    doc = minimal_doc()
    doc["duels"][0]["right"] = "i3"
    path, msg = path_of(doc)
    assert path == "$.duels[0]" and "subcategor" in msg


def test_ranking_not_permutation():
    doc = minimal_doc()
    doc["rankings"][0]["ordering"][0] = doc["rankings"][0]["ordering"][1]
    path, _ = path_of(doc)
    assert path.startswith("$.rankings[0]")


def test_ranking_non_string_entries():
    doc = minimal_doc()
    doc["rankings"][0]["ordering"][3] = 7
    path, _ = path_of(doc)
    assert path.startswith("$.rankings[0]")


def test_partition_image_sets(dataset):
    sets = partition_image_sets(dataset)
    assert sorted(s.value for s in sets) == sorted(s.value for s in Subcategory)
    mcr_ids = [im.image_id for im in sets[Subcategory.MISSING_CURB_RAMP]]
    assert mcr_ids == sorted(mcr_ids)
    assert len(mcr_ids) == 6
    # every image lands in exactly one set
    total = sum(len(v) for v in sets.values())
    assert total == len(dataset.images)


def test_shipped_schema_accepts_fixture(survey_text):
    import jsonschema

    from pathlib import Path

    schema_path = (
        Path(__file__).resolve().parents[1]
        / "src" / "sidewalk_access" / "schema" / "survey_dataset.schema.json"
    )
    schema = json.loads(schema_path.read_text(encoding="utf-8"))
    jsonschema.validate(json.loads(survey_text), schema)
    # the schema rejects structure the parser rejects
    broken = minimal_doc()
    broken["passability"][0]["vote"] = "maybe"
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(broken, schema)
    del broken["passability"]
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(broken, schema)
