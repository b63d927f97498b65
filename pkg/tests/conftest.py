import itertools
from fractions import Fraction
from math import comb

import pytest

from polyastates import PolyaParams
from polyastates.grid import load_grid

GRID_M = (1, 2, 5, 20, 100)
GRID_GAMMA = (0.0, 0.01, 0.5, 5.0)
GRID_ETA = (0.0, 0.1, 0.5, 0.9, 1.0)

STANDARD_GRID = [PolyaParams(*t) for t in itertools.product(GRID_M, GRID_GAMMA, GRID_ETA)]


def exact_polya(M, gamma, eta):
    """Pólya pmf in exact rational arithmetic, straight from the factor products."""
    g, e = Fraction(gamma), Fraction(eta)
    eb = 1 - e
    den = Fraction(1)
    for k in range(1, M):
        den *= 1 + k * g
    out = []
    for n in range(M + 1):
        num = Fraction(comb(M, n))
        for k in range(n):
            num *= e + k * g
        for k in range(M - n):
            num *= eb + k * g
        out.append(num / den)
    return out


@pytest.fixture(scope="session")
def standard_grid():
    return load_grid()


# one PASS/FAIL line per acceptance criterion in the terminal summary
_CRITERIA: dict[str, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion covered by the test")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    _CRITERIA.setdefault(marker.args[0], []).append(call.excinfo is None)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcomes in _CRITERIA.items():
        terminalreporter.write_line(f"{'PASS' if all(outcomes) else 'FAIL'}  {label}")
