from fractions import Fraction

import pytest

from tubenull import _accel
from tubenull.core import CarpetSpec, HomIfsSpec

BACKENDS = [False] + ([True] if _accel.HAVE_EXT else [])


@pytest.fixture(params=BACKENDS, ids=lambda b: "cython" if b else "python")
def use_ext(request):
    return request.param


@pytest.fixture
def sierpinski():
    return CarpetSpec(3, 2, [(a, b) for a in range(3) for b in range(3) if (a, b) != (1, 1)])


@pytest.fixture
def carpet15():
    return CarpetSpec(4, 2, [(a, b) for a in range(4) for b in range(4) if (a, b) != (1, 1)])


@pytest.fixture
def triangle():
    return HomIfsSpec(Fraction(3, 10), [(0, 0), (1, 0), (0, 1)])


@pytest.fixture
def four_corners():
    return HomIfsSpec(Fraction(7, 20), [(0, 0), (1, 0), (0, 1), (1, 1)])


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance") or __import__("sys").modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])
