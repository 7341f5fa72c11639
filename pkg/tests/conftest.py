import pytest

from linecode import FieldSpec, Line, Point, build_code, make_code
from linecode.geometry import Configuration


@pytest.fixture(scope="session")
def grid_4x5():
    """The (q=101, n=4, m=5, d=2) grid code used throughout the decoding tests."""
    return make_code(101, 4, 5, 2, "grid", 7)


@pytest.fixture(scope="session")
def tiny_code():
    """Hand-checkable code over F_5: L1: y = 0, L2: x = 0, two points each, d = 1."""
    f5 = FieldSpec(5)
    l1 = Line.from_ints(f5, 0, 1, 0)
    l2 = Line.from_ints(f5, 1, 0, 0)
    pts = (
        (Point(f5(1), f5(0)), Point(f5(2), f5(0))),
        (Point(f5(0), f5(1)), Point(f5(0), f5(2))),
    )
    return Configuration(f5, (l1, l2), pts)


@pytest.fixture(scope="session")
def code_3x3_f5():
    return make_code(5, 3, 3, 1, "random", 0)


@pytest.fixture(scope="session")
def grid_2x3_f5():
    return make_code(5, 2, 3, 1, "grid", 0)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
