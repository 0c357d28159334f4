"""Metric closure of a CARP instance and the solution maps between cost functions.

``down-triangle`` costs keep the original cost on positive-demand edges and
use the shortest-path distance elsewhere; ``full-triangle`` costs use the
shortest-path distance on every edge.  ``R`` collects the positive-demand
edges whose two costs differ and ``r`` the total difference over ``R``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from .core import (
    DOWN_TRIANGLE,
    FULL_TRIANGLE,
    CarpError,
    CostFunction,
    DisconnectedInstanceError,
    Instance,
    Route,
    Solution,
    Step,
    Verdict,
    route_cost,
    solution_cost,
    validate,
)

INF = math.inf


class InfeasibleSolutionError(CarpError):
    def __init__(self, verdict: Verdict, context: str = ""):
        self.verdict = verdict
        lines = "; ".join(str(v) for v in verdict.violations)
        super().__init__(f"infeasible solution{context}: {lines}")


class PreconditionError(CarpError):
    pass


def shortest_paths(vertex_count: int, edges) -> tuple[list[list], list[list[int]]]:
    """Floyd-Warshall over ``(u, v, cost)`` triples.

    Returns ``(dist, pred)`` where ``pred[s][t]`` is the vertex preceding ``t``
    on the chosen ``s``-``t`` path (``-1`` when ``s == t`` or unreachable).
    Distances only change on strict improvement and intermediates are tried in
    increasing index order, so paths are reproducible.
    """
    n = vertex_count
    dist: list[list] = [[INF] * n for _ in range(n)]
    pred = [[-1] * n for _ in range(n)]
    for i in range(n):
        dist[i][i] = 0
    for u, v, c in edges:
        if c < dist[u][v]:
            dist[u][v] = dist[v][u] = c
            pred[u][v] = u
            pred[v][u] = v
    for k in range(n):
        dk = dist[k]
        pk = pred[k]
        for i in range(n):
            dik = dist[i][k]
            if dik == INF:
                continue
            di = dist[i]
            pi = pred[i]
            for j in range(n):
                alt = dik + dk[j]
                if alt < di[j]:
                    di[j] = alt
                    pi[j] = pk[j]
    return dist, pred


@dataclass(frozen=True)
class ReductionArtifacts:
    instance: Instance
    dist: tuple[tuple, ...]
    pred: tuple[tuple[int, ...], ...]
    down_costs: tuple[int, ...]
    full_costs: tuple[int, ...]
    R: frozenset[int]
    r: int

    @cached_property
    def down_triangle(self) -> CostFunction:
        return CostFunction(DOWN_TRIANGLE, self.down_costs)

    @cached_property
    def full_triangle(self) -> CostFunction:
        return CostFunction(FULL_TRIANGLE, self.full_costs)

    @cached_property
    def original(self) -> CostFunction:
        return CostFunction.original(self.instance)

    def cost_function(self, mode: str) -> CostFunction:
        return {
            "original": self.original,
            DOWN_TRIANGLE: self.down_triangle,
            FULL_TRIANGLE: self.full_triangle,
        }[mode]

    def path(self, s: int, t: int) -> list[Step]:
        """Deadhead steps along the stored shortest ``s``-``t`` path."""
        if s == t:
            return []
        if self.dist[s][t] == INF:
            raise DisconnectedInstanceError(f"disconnected instance: no path {s}->{t}")
        graph = self.instance.graph
        row = self.pred[s]
        steps: list[Step] = []
        x = t
        while x != s:
            p = row[x]
            e = graph.edge_between(p, x)
            steps.append(Step(e.id, p, x, False))
            x = p
            if len(steps) > graph.vertex_count:
                raise AssertionError(f"predecessor cycle on path {s}->{t}")
        steps.reverse()
        return steps


def metric_closure(instance: Instance) -> ReductionArtifacts:
    """All-pairs distances under the original costs plus both modified cost vectors."""
    dist, pred = shortest_paths(
        instance.vertex_count, ((e.u, e.v, e.cost) for e in instance.edges)
    )
    full, down = [], []
    R = set()
    r = 0
    for e in instance.edges:
        d = dist[e.u][e.v]
        full.append(d)
        down.append(e.cost if e.demand > 0 else d)
        if e.demand > 0 and e.cost != d:
            R.add(e.id)
            r += e.cost - d
    reach = dist[instance.depot]
    for e in instance.required:
        if reach[e.u] == INF or reach[e.v] == INF:
            raise DisconnectedInstanceError()
    return ReductionArtifacts(
        instance=instance,
        dist=tuple(tuple(row) for row in dist),
        pred=tuple(tuple(row) for row in pred),
        down_costs=tuple(down),
        full_costs=tuple(full),
        R=frozenset(R),
        r=r,
    )


def reduced_instance(instance: Instance, artifacts: ReductionArtifacts, mode: str) -> Instance:
    if mode == FULL_TRIANGLE:
        return instance.with_costs(artifacts.full_costs)
    if mode == DOWN_TRIANGLE:
        return instance.with_costs(artifacts.down_costs)
    raise ValueError(f"mode must be {DOWN_TRIANGLE!r} or {FULL_TRIANGLE!r}, got {mode!r}")


def _require_feasible(instance: Instance, solution: Solution, context: str) -> None:
    verdict = validate(instance, solution)
    if not verdict.ok:
        raise InfeasibleSolutionError(verdict, context)


def normalize_solution(solution: Solution, artifacts: ReductionArtifacts) -> Solution:
    """Keep only the serving traversal of each R-edge.

    Every other traversal of an R-edge is replaced by the stored shortest path
    between its endpoints, which avoids the edge and costs the same under the
    full-triangle costs.
    """
    _require_feasible(artifacts.instance, solution, " for the full-triangle instance")
    R = artifacts.R
    if not R:
        return solution
    routes = []
    for route in solution.routes:
        steps: list[Step] = []
        for s in route.steps:
            if s.edge in R and not s.served:
                steps.extend(artifacts.path(s.tail, s.head))
            else:
                steps.append(s)
        routes.append(Route(tuple(steps)))
    return Solution(tuple(routes))


def lift_solution(solution: Solution, artifacts: ReductionArtifacts) -> Solution:
    """Expand zero-demand traversals whose down-triangle cost is a path length.

    The result uses original costs and costs exactly what the input costs
    under down-triangle costs.
    """
    _require_feasible(artifacts.instance, solution, " for the down-triangle instance")
    edges = artifacts.instance.edges
    down = artifacts.down_costs
    routes = []
    for route in solution.routes:
        steps: list[Step] = []
        for s in route.steps:
            e = edges[s.edge]
            if e.demand == 0 and e.cost != down[e.id]:
                steps.extend(artifacts.path(s.tail, s.head))
            else:
                steps.append(s)
        routes.append(Route(tuple(steps)))
    return Solution(tuple(routes))


@dataclass(frozen=True)
class GapCheck:
    down_triangle_cost: int
    full_triangle_cost: int
    r: int

    @property
    def holds(self) -> bool:
        return self.full_triangle_cost <= self.down_triangle_cost - self.r


def down_cost_of(solution: Solution, artifacts: ReductionArtifacts) -> int:
    """Cost of ``solution`` under the down-triangle costs."""
    return solution_cost(solution, artifacts.down_triangle)


def observation_gap(solution: Solution, artifacts: ReductionArtifacts) -> GapCheck:
    """Costs under both modified cost functions for a solution using every R-edge."""
    used = {s.edge for route in solution.routes for s in route.steps}
    missing = sorted(artifacts.R - used)
    if missing:
        raise PreconditionError(f"solution does not traverse R-edges {missing}")
    return GapCheck(
        down_cost_of(solution, artifacts),
        solution_cost(solution, artifacts.full_triangle),
        artifacts.r,
    )


def observation_gap_check(solution: Solution, artifacts: ReductionArtifacts) -> bool:
    return observation_gap(solution, artifacts).holds


def triangle_violations(dist) -> list[tuple[int, int, int]]:
    """Every triple ``(u, v, w)`` with ``dist[u][w] > dist[u][v] + dist[v][w]``."""
    n = len(dist)
    bad = []
    for u in range(n):
        du = dist[u]
        for v in range(n):
            duv = du[v]
            dv = dist[v]
            for w in range(n):
                if du[w] > duv + dv[w]:
                    bad.append((u, v, w))
    return bad


def route_costs(route: Route, artifacts: ReductionArtifacts) -> tuple[int, int, int]:
    """``(original, down-triangle, full-triangle)`` costs of one route."""
    return (
        route_cost(route, artifacts.original),
        route_cost(route, artifacts.down_triangle),
        route_cost(route, artifacts.full_triangle),
    )
