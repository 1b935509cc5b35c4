import numpy as np
import pytest


@pytest.fixture
def rng():
    # tests draw their own fixtures from numpy's default generator so that
    # oracles never share a code path with the package's Philox/Box-Muller sampler
    return np.random.default_rng(20240531)


def random_spd(rng, n, cond_floor=0.5):
    m = rng.standard_normal((n, n))
    return m @ m.T + cond_floor * np.eye(n)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one acceptance line; printed in the terminal summary even when output is captured."""

    def record(label, ok, detail=""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
