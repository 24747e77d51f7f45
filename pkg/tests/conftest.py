import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from jrgroups import ApprovalElection

settings.register_profile("default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def elections(draw, max_n=12, max_m=8, min_n=1):
    n = draw(st.integers(min_n, max_n))
    m = draw(st.integers(1, max_m))
    k = draw(st.integers(1, m))
    ballots = [tuple(sorted(draw(st.sets(st.integers(0, m - 1), max_size=m)))) for _ in range(n)]
    return ApprovalElection.from_ballots(ballots, m, k)


@st.composite
def election_and_group(draw, **kw):
    e = draw(elections(**kw))
    w = tuple(sorted(draw(st.sets(st.integers(0, e.m - 1), max_size=e.m))))
    return e, w


def random_ic(rng, n, m, k, p):
    return ApprovalElection.from_matrix(rng.random((n, m)) < p, k)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is not None and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in module.RESULTS:
            terminalreporter.write_line(line)
