from pathlib import Path

import pytest

from flipdyn import Color, Configuration, Point, PointSet, Version

FIXTURES = Path(__file__).parent / "fixtures"

# longest / shortest flip sequences, computed once by exhaustive search and frozen
ORACLE_VALUES = {
    "mm_square_diagonals": (1, 1),
    "mm_square_sides": (0, 0),
    "mm_hexagon_diagonals": (3, 1),
    "mm_random_6": (3, 1),
    "mm_convex_6": (2, 2),
    "rb_random_6": (3, 1),
    "rb_convex_6": (1, 1),
    "g_path_star": (1, 1),
    "g_repeated": (1, 1),
    "tsp_triangle": (0, 0),
}


def make_points(coords, colors=None):
    colors = colors or {}
    return PointSet(Point(i, x, y, colors.get(i)) for i, (x, y) in enumerate(coords))


# p1=(0,0), p2=(0,2), p3=(2,2), p4=(2,0) with ids 1..4
SQUARE = PointSet([Point(1, 0, 0), Point(2, 0, 2), Point(3, 2, 2), Point(4, 2, 0)])


@pytest.fixture
def square():
    return SQUARE


@pytest.fixture
def square_diagonals():
    return Configuration(SQUARE, ((1, 3), (2, 4)), Version.MM)


@pytest.fixture
def square_sides():
    return Configuration(SQUARE, ((1, 2), (3, 4)), Version.MM)


@pytest.fixture
def square_rb():
    pts = SQUARE.recolored({1: Color.RED, 2: Color.RED, 3: Color.BLUE, 4: Color.BLUE})
    return Configuration(pts, ((1, 3), (2, 4)), Version.RB)


def random_config(version, n_points, seed, kind="random", box=60, **kw):
    """A seeded random configuration on a general-position point set."""
    from flipdyn.generators import GenSpec, gen_configuration, gen_points
    pts = gen_points(GenSpec(kind, n_points, seed, box, kw.pop("t", 0)))
    return gen_configuration(pts, version, seed, **kw)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
