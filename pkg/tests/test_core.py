import pytest
from hypothesis import given

from carpkit.core import (
    CostFunction,
    Graph,
    InstanceError,
    Route,
    Solution,
    StructuralError,
    route_cost,
    solution_cost,
    validate,
)
from carpkit.exact import solve_exact
from carpkit.tsp import fig1_instance

from conftest import instances, make_instance, route


def test_smallest_feasible_tour(single):
    sol = Solution((route((0, 0, 1, True), (0, 1, 0, False)),))
    assert validate(single, sol).ok


def test_empty_solution_leaves_edge_unserved(single):
    verdict = validate(single, Solution())
    assert not verdict.ok
    assert [v.message for v in verdict.violations] == ["edge 0 unserved"]


def test_edge_served_by_two_routes(e1):
    r = route((2, 0, 2, True), (2, 2, 0, False))
    verdict = validate(e1, Solution((r, r)))
    assert [str(v) for v in verdict.violations] == ["solution: edge 2 served by 2 routes"]


def test_route_level_violations():
    inst = make_instance(3, [(0, 1, 1, 2), (1, 2, 1, 2), (0, 2, 1, 0)], capacity=3)
    r = route((0, 0, 1, True), (1, 1, 2, True), (2, 2, 0, True))
    messages = [str(v) for v in validate(inst, Solution((r,))).violations]
    assert "route 0: edge 2 has zero demand but is flagged served" in messages
    assert "route 0: load 4 exceeds capacity 3" in messages



def test_served_twice_in_one_route_and_open_walk():
    inst = make_instance(3, [(0, 1, 1, 1), (1, 2, 1, 0)], capacity=3)
    r = route((0, 0, 1, True), (0, 1, 0, True))
    assert "route 0: edge 0 flagged served 2 times" in [str(v) for v in validate(inst, Solution((r,))).violations]
    open_walk = route((0, 0, 1, True), (1, 1, 2, False))
    assert "route 0: walk is not closed" in [str(v) for v in validate(inst, Solution((open_walk,))).violations]


def test_walk_must_visit_depot():
    inst = make_instance(3, [(0, 1, 1, 0), (1, 2, 1, 1)], depot=0, capacity=1)
    away = route((1, 1, 2, True), (1, 2, 1, False))
    messages = [str(v) for v in validate(inst, Solution((away,))).violations]
    assert messages == ["route 0: walk does not pass through the depot"]


def test_structural_errors(single):
    with pytest.raises(StructuralError, match="unknown edge id"):
        validate(single, Solution((route((5, 0, 1, True)),)))
    inst = make_instance(3, [(0, 1, 1, 1), (1, 2, 1, 0)])
    with pytest.raises(StructuralError, match="not contiguous"):
        validate(inst, Solution((route((0, 0, 1, True), (1, 2, 1, False)),)))
    with pytest.raises(StructuralError, match="does not join"):
        validate(inst, Solution((route((1, 0, 2, False)),)))


def test_empty_routes_are_allowed(single):
    sol = Solution((Route(), route((0, 0, 1, True), (0, 1, 0, False))))
    assert validate(single, sol).ok
    assert len(sol.pruned().routes) == 1


def test_demand_free_instance_accepts_empty_solution():
    inst = make_instance(2, [(0, 1, 3, 0)])
    assert validate(inst, Solution()).ok


@pytest.mark.parametrize(
    "edges, message",
    [
        ([(0, 0, 1, 0)], "self-loop"),
        ([(0, 1, 1, 0), (1, 0, 2, 0)], "duplicate"),
        ([(0, 1, -1, 0)], "non-negative"),
        ([(0, 1, 1, 5)], "exceeds capacity"),
        ([(0, 1, 1, 0), (2, 3, 1, 1)], "disconnected"),
    ],
)
def test_instance_invariants(edges, message):
    with pytest.raises(InstanceError, match=message):
        make_instance(4, edges, capacity=2)


def test_cost_overflow_rejected():
    with pytest.raises(InstanceError, match="64-bit"):
        make_instance(2, [(0, 1, 2**62, 1)])


def test_route_cost_examples(single):
    cf = CostFunction.original(single)
    r = route((0, 0, 1, True), (0, 1, 0, False))
    assert route_cost(r, cf) == 8
    assert route_cost(Route(), cf) == 0
    assert solution_cost(Solution((r,)), cf) == 8


def test_solution_cost_adds_routes():
    inst = make_instance(3, [(0, 1, 4, 1), (0, 2, 3, 1), (1, 2, 0, 0)], capacity=1)
    r1 = route((0, 0, 1, True), (0, 1, 0, False))
    r2 = route((1, 0, 2, True), (2, 2, 1, False), (0, 1, 0, False))
    assert solution_cost(Solution((r1, r2)), CostFunction.original(inst)) == 15


def test_fig1_optimal_tour_costs_six():
    inst = fig1_instance(1000)
    # v1' -> v4' (1), serve v4, v4'' -> v3' (1), serve v3, v3'' -> v2' (1), serve v2,
    # then back v2' -> v3' -> v4' -> v1' over unit edges, serving v1 on the way out
    g = inst.graph
    walk = [(0, 1), (1, 6), (6, 7), (7, 4), (4, 5), (5, 2), (2, 3), (3, 4), (4, 6), (6, 0)]
    served = {(0, 1), (6, 7), (4, 5), (2, 3)}
    steps = [(g.edge_between(a, b).id, a, b, (a, b) in served) for a, b in walk]
    r = route(*steps)
    assert validate(inst, Solution((r,))).ok
    assert route_cost(r, CostFunction.original(inst)) == 6
    assert solve_exact(inst).optimum == 6


@given(instances())
def test_validate_is_pure(inst):
    sol = solve_exact(inst).witness if len(inst.required) <= 5 else Solution()
    assert validate(inst, sol) == validate(inst, sol)


@given(instances(max_required=4))
def test_route_cost_additive_under_concatenation(inst):
    sol = solve_exact(inst).witness
    cf = CostFunction.original(inst)
    if len(sol.routes) >= 2:
        a, b = sol.routes[0], sol.routes[1]
        assert route_cost(a + b, cf) == route_cost(a, cf) + route_cost(b, cf)
        merged = Solution((a + b,) + sol.routes[2:])
        assert solution_cost(merged, cf) == solution_cost(sol, cf)


def test_graph_requires_positional_ids():
    from carpkit.core import Edge

    with pytest.raises(InstanceError, match="carries id"):
        Graph(2, (Edge(3, 0, 1, 1, 0),))
