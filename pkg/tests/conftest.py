import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def nonneg_matrices(draw, max_n=6, max_d=4, min_n=1):
    n = draw(st.integers(min_n, max_n))
    d = draw(st.integers(1, max_d))
    entries = st.one_of(st.just(0.0), st.floats(0.01, 10.0))
    rows = [[draw(entries) for _ in range(d)] for _ in range(n)]
    return np.array(rows)


@st.composite
def distributions(draw, max_n=6, max_d=4, min_n=1):
    M = draw(nonneg_matrices(max_n, max_d, min_n))
    M[:, 0] += 0.05  # keep every row nonzero
    return M / M.sum(axis=1, keepdims=True)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
