import json

import pytest

from sidewalk_access.analysis import derive_confidence, tally_passability
from sidewalk_access.errors import ProfileError
from sidewalk_access.model import BarrierLabelType, MobilityAid
from sidewalk_access.profiles import (
    SHORTEST_PROFILE_ID,
    GroupProfile,
    build_profiles,
    customize_profile,
    load_profiles,
    save_profiles,
    shortest_profile,
)


@pytest.fixture(scope="module")
def derived(dataset):
    return build_profiles(derive_confidence(tally_passability(dataset, "label_type")))


def test_build_one_per_canonical_group(derived):
    ids = [p.profile_id for p in derived]
    assert ids == [
        "walking_cane",
        "walker",
        "mobility_scooter",
        "manual_wheelchair",
        "motorized_wheelchair",
    ]
    for p in derived:
        assert p.provenance == "derived"
        assert p.base_profile_id is None
        assert set(p.confidence) == set(BarrierLabelType)


def test_build_matches_fixture_file(derived, fixture_profiles):
    for p in derived:
        assert p.to_json() == fixture_profiles[p.profile_id].to_json()


def test_roundtrip_is_identity(derived):
    text = save_profiles(derived)
    again = load_profiles(text)
    assert save_profiles(again) == text
    assert [p.to_json() for p in again] == [p.to_json() for p in derived]


def test_confidence_mapping_is_readonly(derived):
    with pytest.raises(TypeError):
        derived[0].confidence[BarrierLabelType.OBSTACLE] = 0.0  # type: ignore[index]


def test_shortest_profile_is_all_zero():
    p = shortest_profile()
    assert p.profile_id == SHORTEST_PROFILE_ID == "shortest"
    assert all(v == 0.0 for v in p.confidence.values())
    assert p.group == "custom"


def test_customize_overrides_and_inherits(derived):
    cane = derived[0]
    custom = customize_profile(
        cane, {BarrierLabelType.MISSING_CURB_RAMP: 1.0}, profile_id="my_cane"
    )
    assert custom.profile_id == "my_cane"
    assert custom.group == "custom"
    assert custom.provenance == "custom"
    assert custom.base_profile_id == "walking_cane"
    assert custom.c(BarrierLabelType.MISSING_CURB_RAMP) == 1.0
    assert custom.c(BarrierLabelType.OBSTACLE) == cane.c(BarrierLabelType.OBSTACLE)


def test_customize_default_id(derived):
    custom = customize_profile(derived[1], {})
    assert custom.profile_id == "custom-walker"


def test_customize_rejects_bad_values(derived):
    with pytest.raises(ProfileError):
        customize_profile(derived[0], {BarrierLabelType.OBSTACLE: 1.5})
    with pytest.raises(ProfileError):
        customize_profile(derived[0], {BarrierLabelType.OBSTACLE: True})
    with pytest.raises(ProfileError):
        customize_profile(derived[0], {"obstacle": 0.5})  # type: ignore[dict-item]


def test_load_rejects_malformed():
    with pytest.raises(ProfileError):
        load_profiles("not json")
    with pytest.raises(ProfileError):
        load_profiles("{}")
    base = shortest_profile().to_json()

    def broken(**patch):
        doc = json.loads(json.dumps([base]))
        doc[0].update(patch)
        return json.dumps(doc)

    with pytest.raises(ProfileError, match="profile_id"):
        load_profiles(broken(profile_id=""))
    with pytest.raises(ProfileError, match="group"):
        load_profiles(broken(group="hoverboard"))
    with pytest.raises(ProfileError, match="confidence"):
        load_profiles(broken(confidence=[]))
    with pytest.raises(ProfileError, match="unknown barrier"):
        load_profiles(broken(confidence={"pothole": 0.5}))
    with pytest.raises(ProfileError, match="missing confidence"):
        load_profiles(broken(confidence={"obstacle": 0.5}))
    with pytest.raises(ProfileError, match="outside"):
        conf = {lt.value: 0.5 for lt in BarrierLabelType}
        conf["obstacle"] = -0.1
        load_profiles(broken(confidence=conf))
    with pytest.raises(ProfileError, match="provenance"):
        load_profiles(broken(provenance={"kind": "guessed"}))
    with pytest.raises(ProfileError, match="base_profile_id"):
        load_profiles(
            broken(provenance={"kind": "derived", "base_profile_id": "x"})
        )
    two = json.loads(json.dumps([base, base]))
    with pytest.raises(ProfileError, match="duplicate"):
        load_profiles(json.dumps(two))


def test_build_requires_full_table(dataset):
    table = derive_confidence(tally_passability(dataset, "label_type"))
    cells = dict(table.cells)
    del cells[(MobilityAid.WALKER, BarrierLabelType.OBSTACLE)]
    with pytest.raises(ProfileError, match="walker"):
        build_profiles(type(table)(cells=cells))


def test_profile_ids_are_stable_json(fixture_profiles):
    # the committed file is the canonical serialization of itself
    text = (
        save_profiles([fixture_profiles[k] for k in fixture_profiles])
    )
    assert json.loads(text)[0]["profile_id"] == "walking_cane"
