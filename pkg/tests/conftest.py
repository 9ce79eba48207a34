import numpy as np
import pytest

from trisample import (build_slow_gadget, check_vertex_condition, derive_schnyder_coloring,
                       distinct_triangulations, find_triangles, hexagonal_patch,
                       nest_triangulation, stacked_triangulation)


def assert_valid_state(o):
    """Out-degrees, colour trees and vertex condition of an Orientation3."""
    assert o.is_valid(), f"bad out-degree at {o.first_violation()}"
    w = derive_schnyder_coloring(o)
    assert w.trees_valid()
    for v in o.tri.internal_vertices:
        assert check_vertex_condition(w, v), f"vertex condition fails at {v}"


def has_separating_triangle(tri):
    return any(not t.facial for t in find_triangles(tri))


def small_instances():
    """Triangulations with n <= 5: all of n <= 3 plus the richest and separating ones of n = 4, 5."""
    out = []
    for n in (1, 2, 3):
        out += distinct_triangulations(n)
    for n in (4, 5):
        tris = distinct_triangulations(n)
        sep = [t for t in tris if has_separating_triangle(t)]
        four = [t for t in tris if not has_separating_triangle(t)]
        out += four[:4] + sep[:3]
    return out


@pytest.fixture(scope="session")
def k4():
    return stacked_triangulation([])


@pytest.fixture(scope="session")
def hexagon():
    return hexagonal_patch()


@pytest.fixture(scope="session")
def gadget2():
    return build_slow_gadget(2)


@pytest.fixture(scope="session")
def gadget3():
    return build_slow_gadget(3)


@pytest.fixture(scope="session")
def nested():
    h = hexagonal_patch()
    return nest_triangulation(h, 0, h)


@pytest.fixture(scope="session")
def instances():
    return small_instances()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    res = item.config.stash.setdefault(_RESULTS, {})
    key = (mark.args[0], mark.args[1], item.name)
    if rep.when == "call" or rep.outcome != "passed":
        state = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[rep.outcome]
        if res.get(key) != "FAIL":
            res[key] = state


_RESULTS = pytest.StashKey()


def pytest_terminal_summary(terminalreporter, config):
    res = config.stash.get(_RESULTS, {})
    if not res:
        return
    terminalreporter.section("acceptance criteria")
    for (num, title, name), state in sorted(res.items()):
        terminalreporter.write_line(f"{state} criterion {num}: {title} [{name}]")
