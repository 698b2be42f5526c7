from fractions import Fraction as F

import pytest
from hypothesis import settings

from wshift import AtomicCharge

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def mu3():
    """1/4 d(-1) + 1/4 d(0) + 1/2 d(1)."""
    return AtomicCharge(((-1, F(1, 4)), (0, F(1, 4)), (1, F(1, 2))))


@pytest.fixture
def mu3_r():
    """Same as ``mu3`` with the middle atom moved to 1/2."""
    return AtomicCharge(((-1, F(1, 4)), (F(1, 2), F(1, 4)), (1, F(1, 2))))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
