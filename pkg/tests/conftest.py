import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from quotacore import CapInstance, NetworkInstance  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@st.composite
def network_instances(draw, max_n=6, min_quota=0):
    n = draw(st.integers(1, max_n))
    quotas = draw(st.lists(st.integers(min_quota, n), min_size=n, max_size=n))
    prefs = [draw(st.permutations(range(n))) for _ in range(n)]
    return NetworkInstance(quotas, prefs)


@st.composite
def cap_instances(draw, max_agents=5, max_items=7):
    n = draw(st.integers(1, max_agents))
    m = draw(st.integers(n, max_items))
    order = draw(st.permutations(range(m)))
    cuts = sorted(draw(st.sets(st.integers(1, m - 1), min_size=n - 1, max_size=n - 1))) if n > 1 else []
    bounds = [0, *cuts, m]
    endowments = [order[a:b] for a, b in zip(bounds, bounds[1:])]
    prefs = [draw(st.permutations(range(m))) for _ in range(n)]
    return CapInstance(m, endowments, prefs)


@pytest.fixture
def example3():
    return NetworkInstance((1, 2), ((0, 1), (0, 1)))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
