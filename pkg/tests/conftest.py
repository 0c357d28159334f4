from __future__ import annotations

import pytest
from hypothesis import strategies as st

from carpkit.core import Edge, Graph, Instance, Route, Solution, Step


def make_instance(n, edges, depot=0, capacity=1):
    return Instance(Graph.from_tuples(n, edges), depot, capacity)


# v0=0, a=1, b=2; the required edge v0-b is dearer than the detour via a
E1_EDGES = [(0, 1, 2, 0), (1, 2, 3, 0), (0, 2, 10, 1)]


@pytest.fixture
def e1():
    return make_instance(3, E1_EDGES)


@pytest.fixture
def single():
    return make_instance(2, [(0, 1, 4, 1)])


def route(*steps):
    return Route(tuple(Step(*s) for s in steps))


@st.composite
def instances(draw, max_vertices=7, max_cost=12, max_required=None, zero_costs=True):
    """Connected simple graphs; a spanning tree is laid first so every vertex reaches the depot."""
    n = draw(st.integers(2, max_vertices))
    lo = 0 if zero_costs else 1
    pairs = {}
    for v in range(1, n):
        u = draw(st.integers(0, v - 1))
        pairs[(u, v)] = None
    extra = draw(
        st.lists(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] < p[1]),
            max_size=n * 2,
        )
    )
    for p in extra:
        pairs.setdefault(p, None)
    capacity = draw(st.integers(1, 5))
    raw = []
    for (u, v) in pairs:
        cost = draw(st.integers(lo, max_cost))
        demand = draw(st.integers(0, capacity)) if draw(st.booleans()) else 0
        raw.append((u, v, cost, demand))
    if max_required is not None:
        seen = 0
        for i, (u, v, c, d) in enumerate(raw):
            if d > 0:
                seen += 1
                if seen > max_required:
                    raw[i] = (u, v, c, 0)
    depot = draw(st.integers(0, n - 1))
    return Instance(Graph(n, tuple(Edge(i, *t) for i, t in enumerate(raw))), depot, capacity)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
