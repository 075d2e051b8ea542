import numpy as np
import pytest
from hypothesis import strategies as st

from dagmatrix import build_parent_graph
from dagmatrix.enumeration import all_pairs


@pytest.fixture
def chain():
    """1 <- 2 <- 3 <- 4."""
    return build_parent_graph(4, [(1, 2), (2, 3), (3, 4)])


@pytest.fixture
def collider():
    """2 -> 1 <- 3."""
    return build_parent_graph(3, [(1, 2), (1, 3)])


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


@st.composite
def parent_graphs(draw, min_d=1, max_d=6):
    d = draw(st.integers(min_d, max_d))
    pairs = all_pairs(d)
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return build_parent_graph(d, [p for p, k in zip(pairs, keep) if k])


def random_spd(rng, d):
    X = rng.normal(size=(d, d))
    return X @ X.T + d * np.eye(d)


ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion."""

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
