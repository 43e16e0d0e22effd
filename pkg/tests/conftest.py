import json
from pathlib import Path

import pytest

from sidewalk_access.geo import load_graph
from sidewalk_access.model import parse_survey_dataset
from sidewalk_access.profiles import load_profiles

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def survey_text():
    return (DATA / "survey.json").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def dataset(survey_text):
    return parse_survey_dataset(survey_text)


@pytest.fixture(scope="session")
def fixture_graph():
    return load_graph((DATA / "graph.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def fixture_profiles():
    profs = load_profiles((DATA / "profiles.json").read_text(encoding="utf-8"))
    return {p.profile_id: p for p in profs}


@pytest.fixture(scope="session")
def scenario():
    return json.loads((DATA / "scenario.json").read_text(encoding="utf-8"))
