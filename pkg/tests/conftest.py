import json
from pathlib import Path

import pytest

from firedrill import parse_scenario

FIXTURES = Path(__file__).parent.parent / "src" / "firedrill" / "fixtures"


@pytest.fixture(scope="session")
def lab_text() -> str:
    return (FIXTURES / "lab.json").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def lab(lab_text):
    return parse_scenario(lab_text)


@pytest.fixture(scope="session")
def reference_attempts_csv() -> str:
    return (FIXTURES / "reference_attempts.csv").read_text(encoding="utf-8")


def minimal_doc(**overrides) -> str:
    """A minimal valid scenario document; keyword args patch top-level keys."""
    doc = {
        "id": "mini",
        "objects": [
            {"id": "bin", "pos": [2.0, 0.0], "class": "normal",
             "max_intensity": 10.0, "ignition_time_s": 0.0},
        ],
        "extinguishers": [
            {"id": "w1", "kind": "water", "rate": 5.0},
        ],
        "evacuation": {"exit": {"pos": [-2.0, 0.0], "r_m": 0.5}},
    }
    doc.update(overrides)
    return json.dumps(doc)
