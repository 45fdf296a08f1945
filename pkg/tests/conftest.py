import numpy as np
import pytest

from coarsedim.covers import Cover
from coarsedim.metric import closed_ball, gen_grid, random_graph_space
from coarsedim.witness import WitnessFamily


@pytest.fixture
def line6():
    return gen_grid(1, 6)


@pytest.fixture
def two_intervals():
    return Cover([range(0, 4), range(2, 6)])


def random_cover(space, rng, extra=3):
    """Random cover: each point gets one random ball, plus a few random subsets."""
    n = space.size
    elements = []
    for x in range(n):
        if rng.random() < 0.5 or not any(x in e for e in elements):
            r = float(rng.choice(space.row(x)))
            elements.append(closed_ball(space, x, r))
    for _ in range(int(rng.integers(0, extra + 1))):
        k = int(rng.integers(1, n + 1))
        elements.append(rng.choice(n, size=k, replace=False).tolist())
    return Cover(elements)


def random_family(space, rng, max_points=3, max_level=3, S=None):
    """Random witness family with points drawn from a ball of radius S."""
    S = float(rng.choice(space.row(0))) if S is None else S
    sets = []
    for x in range(space.size):
        pool = closed_ball(space, x, S)
        k = int(rng.integers(1, min(max_points, len(pool)) + 1))
        pts = rng.choice(pool, size=k, replace=False)
        pairs = set()
        for p in pts:
            for lvl in rng.choice(np.arange(1, max_level + 1), size=int(rng.integers(1, max_level + 1)),
                                  replace=False):
                pairs.add((int(p), int(lvl)))
        sets.append(pairs)
    return WitnessFamily(S, sets)


def random_space(rng, max_points=12):
    n = int(rng.integers(1, max_points + 1))
    return random_graph_space(n, float(rng.uniform(0.1, 0.6)), rng)


_acceptance_results: list[tuple[str, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        status = "PASS" if rep.passed else "FAIL"
        _acceptance_results.append((marker.args[0], status, marker.args[1]))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, title in sorted(_acceptance_results):
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")
