import random

import pytest

from sieve.components import Component
from sieve.datasets import load_dataset

# two triangles {0,1,2} and {3,4,5} joined by the edge 2-3
DOUBLE_TRIANGLE = [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]


@pytest.fixture
def double_triangle() -> Component:
    return Component.from_edges(6, DOUBLE_TRIANGLE)


@pytest.fixture(scope="session")
def karate():
    return load_dataset("karate")


def random_connected(n: int, extra: float, rng: random.Random) -> list[tuple[int, int]]:
    """Random tree on n nodes plus each other pair with probability ``extra``."""
    edges = set()
    for v in range(1, n):
        edges.add((rng.randrange(v), v))
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < extra:
                edges.add((u, v))
    return sorted(edges)


# -- acceptance reporting ------------------------------------------------------------

CRITERIA = {
    1: "benchmark goldens",
    2: "anytime values",
    3: "oracle equivalence",
    4: "S bounds and identities",
    5: "synthetic S vs Q direction",
    6: "resolution limit",
    7: "BFS scale",
}
_outcomes: dict[int, list[tuple[str, bool, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion number")


def pytest_runtest_logreport(report):
    marks = getattr(report, "criterion", None)
    if marks is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        msg = ""
        if report.failed:
            msg = str(report.longrepr.reprcrash.message if hasattr(report.longrepr, "reprcrash") else report.longrepr)
            msg = msg.splitlines()[0][:120]
        _outcomes.setdefault(marks, []).append((report.nodeid.split("::")[-1], report.passed, msg))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        rep.criterion = mark.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_outcomes):
        runs = _outcomes[k]
        ok = all(p for _, p, _ in runs)
        failed = [f"{name}: {msg}" for name, p, msg in runs if not p]
        line = f"{'PASS' if ok else 'FAIL'} criterion {k} ({CRITERIA.get(k, '')}): {sum(p for _, p, _ in runs)}/{len(runs)} checks"
        terminalreporter.write_line(line)
        for f in failed:
            terminalreporter.write_line(f"    {f}")
