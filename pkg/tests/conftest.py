import math
import os
import sys

import pytest
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from prefixflip.model import MultiArray  # noqa: E402

DATA = os.path.join(os.path.dirname(__file__), "data")


@pytest.fixture
def data_path():
    return lambda name: os.path.join(DATA, name)


dims_strategy = st.one_of(
    st.lists(st.integers(1, 9), min_size=1, max_size=1),
    st.lists(st.integers(1, 4), min_size=2, max_size=2),
    st.lists(st.integers(1, 3), min_size=3, max_size=3),
).map(tuple)


@st.composite
def arrays(draw, dims=dims_strategy, modes=st.sampled_from(["unsigned", "signed"])):
    d = draw(dims)
    mode = draw(modes)
    n = math.prod(d)
    ids = draw(st.permutations(range(1, n + 1)))
    if mode == "signed":
        signs = draw(st.lists(st.sampled_from([1, -1]), min_size=n, max_size=n))
        ids = [i * s for i, s in zip(ids, signs)]
    return MultiArray.from_values(d, ids, mode)


#: (criterion number, PASS/FAIL, description) lines filled in by test_acceptance.py
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, text in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {text}")
