import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from carpkit.approx import (
    EmptyTourError,
    GiantTour,
    approximate_metric,
    build_giant_tour,
    factor_bound,
    lower_bound,
    min_weight_perfect_matching,
    solve,
    split_optimally,
)
from carpkit.core import FULL_TRIANGLE, CostFunction, Solution, solution_cost, validate
from carpkit.exact import solve_exact
from carpkit.reduction import metric_closure, reduced_instance
from carpkit.tsp import fig1_instance

from conftest import instances, make_instance
from oracles import split_by_enumeration


def metric_of(inst):
    art = metric_closure(inst)
    return reduced_instance(inst, art, FULL_TRIANGLE), art


def test_single_edge_tour(single):
    metric, art = metric_of(single)
    tour = build_giant_tour(metric, art)
    assert tour.services == ((0, 0, 1),)
    sol = approximate_metric(metric, art)
    assert solution_cost(sol, CostFunction.original(metric)) == 8


def test_fig1_tour_is_optimal():
    metric, art = metric_of(fig1_instance(1000))
    tour = build_giant_tour(metric, art)
    assert sorted(e for e, _, _ in tour.services) == [0, 1, 2, 3]
    sol = approximate_metric(metric, art)
    assert validate(metric, sol).ok
    assert solution_cost(sol, CostFunction.original(metric)) == 6 == solve_exact(metric).optimum
    # connectors only use the unit edges and the split-pair edges
    assert {metric.edges[s.edge].cost for r in sol.routes for s in r.steps} <= {0, 1}


def test_e1_closure_tour(e1):
    metric, art = metric_of(e1)
    sol = approximate_metric(metric, art)
    assert solution_cost(sol, CostFunction.original(metric)) == 10 == solve_exact(metric).optimum


def test_empty_tour_signal():
    metric, art = metric_of(make_instance(2, [(0, 1, 3, 0)]))
    with pytest.raises(EmptyTourError):
        build_giant_tour(metric, art)
    assert approximate_metric(metric, art) == Solution()
    assert lower_bound(metric, art) == 0


def test_lower_bound_examples(e1):
    metric, art = metric_of(e1)
    assert lower_bound(metric, art) == 5
    metric, art = metric_of(fig1_instance(1000))
    assert lower_bound(metric, art) == 0


def test_split_single_segment_when_capacity_allows():
    inst = make_instance(4, [(0, 1, 1, 1), (1, 2, 1, 1), (2, 3, 1, 1), (3, 0, 1, 0)], capacity=3)
    metric, art = metric_of(inst)
    tour = GiantTour(((0, 0, 1), (1, 1, 2), (2, 2, 3)))
    plan = split_optimally(tour, metric, art)
    assert plan.cuts == (0, 3)
    assert plan.cost == 4


def test_split_three_unit_services_w2():
    inst = make_instance(4, [(0, 1, 1, 1), (1, 2, 1, 1), (2, 3, 1, 1), (3, 0, 1, 0)], capacity=2)
    metric, art = metric_of(inst)
    tour = GiantTour(((0, 0, 1), (1, 1, 2), (2, 2, 3)))
    plan = split_optimally(tour, metric, art)
    edges = metric.edges
    expected = split_by_enumeration(
        tour.services, [e.demand for e in edges], [e.cost for e in edges], art.dist, metric.depot, 2
    )
    assert plan.cost == expected == 6
    assert len(plan.segments()) == 2


@st.composite
def service_sequences(draw):
    inst = draw(instances(max_vertices=7, zero_costs=True))
    req = inst.required
    if not req:
        return inst, ()
    k = draw(st.integers(1, 12))
    picks = draw(st.lists(st.sampled_from(req), min_size=k, max_size=k))
    seq = tuple((e.id, *((e.u, e.v) if draw(st.booleans()) else (e.v, e.u))) for e in picks)
    return inst, seq


@settings(max_examples=200, deadline=None)
@given(service_sequences())
def test_split_matches_enumeration(case):
    inst, seq = case
    metric, art = metric_of(inst)
    if not seq:
        return
    plan = split_optimally(GiantTour(seq), metric, art)
    expected = split_by_enumeration(
        seq, [e.demand for e in metric.edges], [e.cost for e in metric.edges], art.dist, metric.depot, metric.capacity
    )
    assert plan.cost == expected
    loads = [sum(metric.edges[s[0]].demand for s in seq[lo:hi]) for lo, hi in plan.segments()]
    assert max(loads) <= metric.capacity
    assert plan.cuts[0] == 0 and plan.cuts[-1] == len(seq)


def brute_matching(vs, dist):
    best = float("inf")
    for perm in itertools.permutations(vs):
        pairs = list(zip(perm[::2], perm[1::2]))
        best = min(best, sum(dist[a][b] for a, b in pairs))
    return best


@settings(max_examples=60, deadline=None)
@given(instances(max_vertices=7))
def test_exact_matching_is_minimum(inst):
    art = metric_closure(inst)
    vs = list(range(inst.vertex_count - inst.vertex_count % 2))
    pairs, heuristic = min_weight_perfect_matching(vs, art.dist)
    assert not heuristic
    assert sorted(v for p in pairs for v in p) == vs
    assert sum(art.dist[a][b] for a, b in pairs) == brute_matching(vs, art.dist)


def test_matching_fallback_flag():
    n = 16
    dist = [[abs(i - j) for j in range(n)] for i in range(n)]
    pairs, heuristic = min_weight_perfect_matching(list(range(n)), dist)
    assert heuristic
    assert sorted(v for p in pairs for v in p) == list(range(n))


@settings(max_examples=120, deadline=None)
@given(instances(max_required=6))
def test_giant_tour_and_metric_solution(inst):
    metric, art = metric_of(inst)
    if not inst.required:
        return
    tour = build_giant_tour(metric, art)
    assert sorted(e for e, _, _ in tour.services) == sorted(e.id for e in inst.required)
    for eid, a, b in tour.services:
        assert {a, b} == {metric.edges[eid].u, metric.edges[eid].v}
    sol = approximate_metric(metric, art)
    assert validate(metric, sol).ok
    cost = solution_cost(sol, CostFunction.original(metric))
    assert cost == split_optimally(tour, metric, art).cost
    assert cost >= lower_bound(metric, art)
    assert cost >= solve_exact(metric).optimum


def test_solve_e1(e1):
    final, rep = solve(e1)
    assert rep.final_cost == 15 and rep.metric_cost == 10 and rep.r == 5
    assert rep.exact_optimum == 15 and rep.ratio == 1
    assert rep.identity_holds and validate(e1, final).ok


@pytest.mark.parametrize("ell", [1000, 10**6])
def test_solve_fig1(ell):
    final, rep = solve(fig1_instance(ell))
    assert rep.final_cost == 6


def test_solve_demand_free():
    inst = make_instance(3, [(0, 1, 3, 0), (1, 2, 1, 0)])
    final, rep = solve(inst)
    assert final == Solution() and rep.final_cost == 0


def test_report_lines_are_stable(e1):
    lines = solve(e1)[1].lines()
    assert lines == solve(e1)[1].lines()
    assert lines[:8] == [
        "report 1",
        "status ok",
        "final_cost 15",
        "metric_cost 10",
        "down_triangle_cost 15",
        "r 5",
        "identity 10+5=15 ok",
        "lower_bound 10",
    ]
    assert "ratio 1.000000" in lines


@settings(max_examples=120, deadline=None)
@given(instances(max_required=5))
def test_pipeline_identity_and_factor(inst):
    final, rep = solve(inst)
    assert rep.verdict.ok
    assert rep.final_cost == rep.metric_cost + rep.r
    assert solution_cost(final, CostFunction.original(inst)) == rep.final_cost
    assert rep.lower_bound <= rep.exact_optimum <= rep.final_cost
    if inst.capacity >= 2 and rep.exact_optimum:
        assert rep.ratio <= factor_bound(inst.capacity)
