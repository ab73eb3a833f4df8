import random

import pytest

from kstab.errors import InvalidVariety
from kstab.toric_fano import STANDARD_RAYS, build_variety

EXTRA_RAYS = {
    "P1xP1xP1": [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)],
    "P2xP1": [(1, 0, 0), (0, 1, 0), (-1, -1, 0), (0, 0, 1), (0, 0, -1)],
    "BlP2xP1": [(1, 0, 0), (0, 1, 0), (-1, -1, 0), (1, 1, 0), (0, 0, 1), (0, 0, -1)],
    "P1112": [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -2)],
    "P113": [(1, 0), (0, 1), (-1, -3)],  # non-Gorenstein, ell = 3
    "dP7": [(1, 0), (0, 1), (-1, -1), (1, 1), (-1, 0)],
    "dP6": [(1, 0), (0, 1), (-1, -1), (1, 1), (-1, 0), (0, -1)],
}
ALL_RAYS = {**STANDARD_RAYS, **EXTRA_RAYS}


def variety(name):
    return build_variety(ALL_RAYS[name])


@pytest.fixture(scope="session")
def P2():
    return variety("P2")


@pytest.fixture(scope="session")
def BlP2():
    return variety("BlP2")


@pytest.fixture(scope="session")
def P1xP1():
    return variety("P1xP1")


@pytest.fixture(scope="session")
def P112():
    return variety("P112")


@pytest.fixture(scope="session")
def P3():
    return variety("P3")


def random_primitive(rng, n, bound):
    from math import gcd
    while True:
        v = tuple(rng.randint(-bound, bound) for _ in range(n))
        g = 0
        for c in v:
            g = gcd(g, c)
        if g == 1:
            return v


def random_fano(rng, n, max_rays=None, bound=2):
    """Rejection-sample a valid ray set in dimension n."""
    max_rays = max_rays or n + 3
    while True:
        m = rng.randint(n + 1, max_rays)
        rays = {random_primitive(rng, n, bound) for _ in range(m)}
        try:
            return build_variety(sorted(rays))
        except InvalidVariety:
            continue


@pytest.fixture(scope="session")
def random_corpus():
    rng = random.Random(20161)
    return [random_fano(rng, 2) for _ in range(6)] + [random_fano(rng, 3, max_rays=6, bound=1)
                                                       for _ in range(2)]


# acceptance summary lines, printed at the end of the session
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
