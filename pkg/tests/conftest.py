import pytest

from quivermod.fields import FieldSpec
from quivermod.graded import DimVector
from quivermod.quivers import Quiver

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def criterion():
    """Record one pass/fail line for the acceptance summary."""
    def record(name, ok, detail=""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f"  ({detail})" if detail else ""))
        return ok
    return record


@pytest.fixture
def F2():
    return FieldSpec.prime(2)


@pytest.fixture
def F3():
    return FieldSpec.prime(3)


@pytest.fixture
def QQ():
    return FieldSpec.rationals()


@pytest.fixture
def a2():
    return Quiver.of([1, 2], [("a", 1, 2)])


def dv(vertices, *values):
    return DimVector.of(vertices, values)
