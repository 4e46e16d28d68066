import os

import pytest
from hypothesis import HealthCheck, settings

from viscenter.geometry import triangulate, validate_polygon

settings.register_profile(
    "default", max_examples=int(os.environ.get("VISCENTER_EXAMPLES", "40")), deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("default")

SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]
LPOLY = [(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]
ZIGZAG = [(0, 0), (6, 0), (6, 4), (4, 4), (4, 2), (2, 2), (2, 4), (0, 4)]
DATA = os.path.join(os.path.dirname(__file__), "data")

# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def square():
    return validate_polygon(SQUARE)


@pytest.fixture
def lpoly():
    return validate_polygon(LPOLY)


@pytest.fixture
def zigzag():
    return validate_polygon(ZIGZAG)


@pytest.fixture
def tri_of():
    return triangulate
