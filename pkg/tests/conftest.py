from pathlib import Path

import pytest
from hypothesis import strategies as st

from erpart import UNBOUNDED, EntityType, ERModel, MinMaxPair, RelationshipType
from erpart.harness import SEED_MASK, GenConfig, generate_model

DATA = Path(__file__).parent / "data"

EMPLOYEE = EntityType("Employee", "Emp_No", "Name", ("Address", "Gender"))
VEHICLE = EntityType("Vehicle", "VehicleNo", "Make", ("Color",))
PROJECT = EntityType("Project", "ProjectNo", "Title", ("Budget",))
ASSIGNED_TO = RelationshipType("AssignedTo", "Vehicle", "Project",
                               MinMaxPair(0, 3), MinMaxPair(1, 1), ("AssignedDate", "Period"))


@pytest.fixture
def employee_model():
    return ERModel((EMPLOYEE,), ())


@pytest.fixture
def vehicle_project():
    return ERModel((VEHICLE, PROJECT), (ASSIGNED_TO,))


@pytest.fixture
def data_dir():
    return DATA


seeds = st.integers(min_value=0, max_value=SEED_MASK)
models = seeds.map(lambda s: generate_model(GenConfig(seed=s)))

bounds = st.one_of(st.integers(min_value=1, max_value=50), st.just(UNBOUNDED))


@st.composite
def pairs(draw):
    hi = draw(bounds)
    lo = draw(st.integers(min_value=0, max_value=50 if hi is UNBOUNDED else hi))
    return MinMaxPair(lo, hi)


# Filled by test_acceptance, printed after the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
