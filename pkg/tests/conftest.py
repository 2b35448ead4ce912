import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from bpcc.model import TABLE1, CompatibilityMatrix, Instance

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def matrices(draw, p=None):
    p = p or draw(st.integers(1, 6))
    rows = [[1 if k == l else 0 for l in range(p)] for k in range(p)]
    for k in range(p):
        for l in range(k + 1, p):
            rows[k][l] = rows[l][k] = draw(st.integers(0, 1))
    return CompatibilityMatrix(tuple(tuple(r) for r in rows))


@st.composite
def instances(draw, min_n=1, max_n=10, table1=None):
    use_table1 = draw(st.booleans()) if table1 is None else table1
    compat = TABLE1 if use_table1 else draw(matrices())
    b = draw(st.integers(5, 40))
    n = draw(st.integers(min_n, max_n))
    weights = draw(st.lists(st.integers(1, b), min_size=n, max_size=n))
    cats = draw(st.lists(st.integers(0, compat.p - 1), min_size=n, max_size=n))
    return Instance(b, tuple(weights), tuple(cats), compat)


def make(b, items, compat=TABLE1):
    """Instance from (weight, 1-based category) pairs."""
    return Instance(b, tuple(w for w, _ in items), tuple(c - 1 for _, c in items), compat)


@pytest.fixture
def rng():
    return random.Random(12345)


ACCEPTANCE_LINES: list[str] = []


def record(criterion: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
