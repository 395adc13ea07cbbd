"""Shared fixtures and the acceptance summary printer."""

import numpy as np
import pytest

from nodalforms import corpus

ACCEPTANCE_LINES = []


def record_acceptance(number, passed, detail):
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(f"[ACCEPTANCE] {line}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def small_random_graphs():
    """A handful of seeded random graphs for property loops."""
    return [corpus.random_connected_graph(n, seed=s)
            for s, n in enumerate([4, 7, 10, 13, 17, 22, 26, 30])]
