import numpy as np
import pytest

from cyclic_regge.curvature import cyclic_metric
from cyclic_regge.errors import DomainError


def random_cyclic_metric(c, rng, low=0.7, high=1.3, tries=1000):
    """Cyclic length metric with levels drawn uniformly, rejecting non-metrics."""
    for _ in range(tries):
        levels = rng.uniform(low, high, c.m + 1)
        try:
            return levels, cyclic_metric(c, levels)
        except DomainError:
            continue
    raise RuntimeError("could not sample a realizable level vector")


def random_tetra_lengths(rng, low=0.5, high=1.5):
    from cyclic_regge.geometry import is_realizable

    while True:
        L = rng.uniform(low, high, 6)
        if is_realizable(L):
            return L


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def perturbed_metric(c, rng, spread=0.03, tries=1000):
    """A random cyclic metric with every edge jittered; generically not CSC."""
    from cyclic_regge.curvature import Metric

    for _ in range(tries):
        _, g = random_cyclic_metric(c, rng, 0.9, 1.1)
        h = Metric(c, g.lengths * rng.uniform(1 - spread, 1 + spread, len(c.edges)))
        if h.realizable:
            return h
    raise RuntimeError("could not sample a realizable perturbed metric")


ACCEPTANCE_LINES = []


def record(criterion, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
