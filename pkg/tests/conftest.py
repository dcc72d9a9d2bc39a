import numpy as np
import pytest

from extsum.core import PowerSchedule
from extsum.oracles import SelectionStrategy

_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def canonical():
    return PowerSchedule(1, 1, "1/3")


@pytest.fixture
def boundary():
    return SelectionStrategy.boundary()


@pytest.fixture
def rng():
    return np.random.default_rng(20260101)
