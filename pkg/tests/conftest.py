import math

import pytest

from ponceletkit import InnerTemplate, conic_from_ellipse, find_periodic_family, unit_circle

ACCEPTANCE_LINES = []


def record(label: str, passed: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"{label:42s} {'PASS' if passed else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def eccentric5():
    """Unit circle around a circle centered at (0.2, 0), radius solved for (n, k) = (5, 1)."""
    return find_periodic_family(unit_circle(), InnerTemplate(center=(0.2, 0.0), free="radius"), 5, 1)


@pytest.fixture(scope="session")
def weill3():
    """Circles R = 1, r = 0.4 with the offset solved for triangles."""
    return find_periodic_family(unit_circle(), InnerTemplate(radius=0.4, free="offset"), 3, 1)


@pytest.fixture(scope="session")
def regular5():
    return find_periodic_family(unit_circle(), InnerTemplate(free="radius"), 5, 1)


@pytest.fixture(scope="session")
def pentagram():
    return find_periodic_family(unit_circle(), InnerTemplate(free="radius"), 5, 2)


@pytest.fixture(scope="session")
def elliptic5():
    """Outer ellipse with axes 2:1 and a non-homothetic inner ellipse."""
    outer = conic_from_ellipse((0.0, 0.0), (2.0, 1.0), 0.0)
    tpl = InnerTemplate(center=(0.3, 0.05), radius=1.0, aspect=0.6, free="radius")
    return find_periodic_family(outer, tpl, 5, 1)


@pytest.fixture(scope="session")
def skew3():
    """Triangles around a tilted, offset inner ellipse; CM1 is visibly non-circular here."""
    tpl = InnerTemplate(center=(0.1, 0.1), aspect=0.5, tilt=0.5, free="radius")
    return find_periodic_family(unit_circle(), tpl, 3, 1)
