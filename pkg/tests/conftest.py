import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mcenter import generators
from mcenter.metric import validate

F = Fraction


@pytest.fixture
def two_point():
    return validate([[0, 1], [1, 0]])


@pytest.fixture
def grid3():
    return generators.grid(3)


@pytest.fixture
def grid5():
    return generators.grid(5)


@pytest.fixture
def triangle():
    return generators.equilateral(3)


@pytest.fixture
def path3():
    return validate([[0, 1, 2], [1, 0, 1], [2, 1, 0]])


@pytest.fixture
def generic4():
    # all six distances distinct and the triangle inequality holds
    return validate([[0, 5, 6, 7], [5, 0, 8, 9], [6, 8, 0, 10], [7, 9, 10, 0]])


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(test_acceptance.RESULTS):
        terminalreporter.write_line(f"criterion {number}: {test_acceptance.RESULTS[number]}")
