import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from distrcm.sparse import SparsePatternCSC  # noqa: E402

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def patterns(draw, max_n=64, min_n=1, loops=True):
    """Random symmetric pattern; may be disconnected and carry self-loops."""
    n = draw(st.integers(min_n, max_n))
    max_edges = min(3 * n, n * (n - 1) // 2)
    edges = draw(
        st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=max_edges)
    )
    if not loops:
        edges = [(a, b) for a, b in edges if a != b]
    return SparsePatternCSC.from_edges(n, edges)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_VERDICTS: list[str] = []


@pytest.fixture
def verdict():
    """Record one acceptance line, then fail the test if the criterion is not met."""

    def record(criterion, ok, detail=""):
        _VERDICTS.append(f"{'PASS' if ok else 'FAIL'}  criterion {criterion}: {detail}")
        assert ok, f"criterion {criterion} not met: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
