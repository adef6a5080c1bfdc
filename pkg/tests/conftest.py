import itertools

import pytest
from hypothesis import strategies as st

from genpath.graph_core import Graph

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record_criterion():
    def record(label: str, passed: bool, detail: str = "") -> None:
        line = f"criterion {label}: {'PASS' if passed else 'FAIL'}"
        if detail:
            line += f"  ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@st.composite
def graphs(draw, min_vertices=1, max_vertices=8, connected=False):
    n = draw(st.integers(min_vertices, max_vertices))
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    if connected:
        # random spanning tree first, then extra edges
        edges = set()
        for v in range(2, n + 1):
            u = draw(st.integers(1, v - 1))
            edges.add((u, v))
        extra = draw(st.lists(st.sampled_from(pairs), max_size=len(pairs))) if pairs else []
        edges.update(extra)
    else:
        mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
        edges = {p for p, keep in zip(pairs, mask) if keep}
    return Graph(n, frozenset(edges))
