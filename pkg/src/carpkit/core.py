"""Instances, routes, solutions and cost accounting for undirected CARP.

Vertices are 0-based integers and edge ids are positions in ``Graph.edges``.
Costs and demands are exact non-negative integers.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

INT64_MAX = 2**63 - 1

ORIGINAL = "original"
DOWN_TRIANGLE = "down-triangle"
FULL_TRIANGLE = "full-triangle"
COST_MODES = (ORIGINAL, DOWN_TRIANGLE, FULL_TRIANGLE)


class CarpError(ValueError):
    """Base class for all domain errors raised by carpkit."""


class InstanceError(CarpError):
    pass


class DisconnectedInstanceError(InstanceError):
    def __init__(self, message: str = "disconnected instance"):
        super().__init__(message)


class StructuralError(CarpError):
    """A route cannot be read as a walk in the instance graph."""


@dataclass(frozen=True)
class Edge:
    id: int
    u: int
    v: int
    cost: int
    demand: int

    def other(self, x: int) -> int:
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise StructuralError(f"vertex {x} is not an endpoint of edge {self.id}")

    @property
    def required(self) -> bool:
        return self.demand > 0


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(self.edges))
        if not isinstance(self.vertex_count, int) or self.vertex_count < 1:
            raise InstanceError("vertex count must be a positive integer")
        seen: set[tuple[int, int]] = set()
        for i, e in enumerate(self.edges):
            if e.id != i:
                raise InstanceError(f"edge at position {i} carries id {e.id}")
            for x in (e.u, e.v):
                if not 0 <= x < self.vertex_count:
                    raise InstanceError(f"edge {i}: vertex {x} out of range")
            if e.u == e.v:
                raise InstanceError(f"edge {i}: self-loop at vertex {e.u}")
            for name, value in (("cost", e.cost), ("demand", e.demand)):
                if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                    raise InstanceError(f"edge {i}: {name} must be a non-negative integer")
            key = (min(e.u, e.v), max(e.u, e.v))
            if key in seen:
                raise InstanceError(f"edge {i}: duplicate edge {{{e.u},{e.v}}}")
            seen.add(key)

    @classmethod
    def from_tuples(cls, vertex_count: int, edges: Iterable[Sequence[int]]) -> Graph:
        """Build a graph from ``(u, v, cost, demand)`` tuples, numbering edges in order."""
        return cls(vertex_count, tuple(Edge(i, u, v, c, d) for i, (u, v, c, d) in enumerate(edges)))

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex, the ``(neighbour, edge id)`` pairs sorted by edge id."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.vertex_count)]
        for e in self.edges:
            adj[e.u].append((e.v, e.id))
            adj[e.v].append((e.u, e.id))
        return tuple(tuple(sorted(a, key=lambda p: p[1])) for a in adj)

    def edge_between(self, u: int, v: int) -> Edge | None:
        return self._pair_index.get((min(u, v), max(u, v)))

    @cached_property
    def _pair_index(self) -> dict[tuple[int, int], Edge]:
        return {(min(e.u, e.v), max(e.u, e.v)): e for e in self.edges}


@dataclass(frozen=True)
class Instance:
    graph: Graph
    depot: int
    capacity: int

    def __post_init__(self) -> None:
        if not 0 <= self.depot < self.graph.vertex_count:
            raise InstanceError(f"depot {self.depot} is not a vertex")
        if not isinstance(self.capacity, int) or self.capacity < 1:
            raise InstanceError("capacity must be a positive integer")
        for e in self.required:
            if e.demand > self.capacity:
                raise InstanceError(f"edge {e.id}: edge demand exceeds capacity")
        # a closed walk serving k required edges never needs more than
        # 2k+1 shortest paths, each bounded by the total edge cost
        bound = sum(e.cost for e in self.graph.edges) * (2 * len(self.required) + 2)
        if bound > INT64_MAX:
            raise InstanceError("edge costs too large for 64-bit tour costs")
        reach = self.reachable_from_depot
        for e in self.required:
            if not (reach[e.u] and reach[e.v]):
                raise DisconnectedInstanceError(
                    f"disconnected instance: required edge {e.id} unreachable from depot"
                )

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self.graph.edges

    @property
    def vertex_count(self) -> int:
        return self.graph.vertex_count

    @cached_property
    def required(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.graph.edges if e.demand > 0)

    @property
    def total_demand(self) -> int:
        return sum(e.demand for e in self.required)

    @cached_property
    def reachable_from_depot(self) -> tuple[bool, ...]:
        seen = [False] * self.vertex_count
        seen[self.depot] = True
        queue = deque([self.depot])
        while queue:
            x = queue.popleft()
            for y, _ in self.graph.adjacency[x]:
                if not seen[y]:
                    seen[y] = True
                    queue.append(y)
        return tuple(seen)

    def with_costs(self, costs: Sequence[int]) -> Instance:
        """Same graph, depot, capacity and demands with edge costs replaced."""
        if len(costs) != len(self.edges):
            raise InstanceError("cost vector length does not match edge count")
        edges = tuple(
            Edge(e.id, e.u, e.v, int(c), e.demand) for e, c in zip(self.edges, costs)
        )
        return Instance(Graph(self.vertex_count, edges), self.depot, self.capacity)


@dataclass(frozen=True)
class Step:
    """One traversal of ``edge`` from ``tail`` to ``head``."""

    edge: int
    tail: int
    head: int
    served: bool = False


@dataclass(frozen=True)
class Route:
    steps: tuple[Step, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))

    def __len__(self) -> int:
        return len(self.steps)

    def __add__(self, other: Route) -> Route:
        return Route(self.steps + other.steps)

    @property
    def served_edges(self) -> tuple[int, ...]:
        return tuple(s.edge for s in self.steps if s.served)

    def vertices(self) -> list[int]:
        if not self.steps:
            return []
        return [self.steps[0].tail] + [s.head for s in self.steps]


@dataclass(frozen=True)
class Solution:
    routes: tuple[Route, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "routes", tuple(self.routes))

    def serving(self) -> dict[int, list[int]]:
        """The serving function: route index -> edges it serves."""
        return {i: list(r.served_edges) for i, r in enumerate(self.routes)}

    def pruned(self) -> Solution:
        return Solution(tuple(r for r in self.routes if r.steps))


@dataclass(frozen=True)
class CostFunction:
    """Per-edge cost evaluator; ``mode`` records which cost function it is."""

    mode: str
    edge_costs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.mode not in COST_MODES:
            raise ValueError(f"unknown cost mode {self.mode!r}")
        object.__setattr__(self, "edge_costs", tuple(self.edge_costs))

    @classmethod
    def original(cls, instance: Instance) -> CostFunction:
        return cls(ORIGINAL, tuple(e.cost for e in instance.edges))

    def __call__(self, edge_id: int) -> int:
        return self.edge_costs[edge_id]


def route_cost(route: Route, cf: CostFunction) -> int:
    """Sum of step costs; an edge traversed twice is charged twice."""
    costs = cf.edge_costs
    try:
        return sum(costs[s.edge] for s in route.steps)
    except IndexError:
        raise StructuralError("route references an unknown edge id") from None


def solution_cost(solution: Solution, cf: CostFunction) -> int:
    return sum(route_cost(r, cf) for r in solution.routes)


@dataclass(frozen=True)
class Violation:
    route: int | None
    message: str

    def __str__(self) -> str:
        where = "solution" if self.route is None else f"route {self.route}"
        return f"{where}: {self.message}"


@dataclass(frozen=True)
class Verdict:
    violations: tuple[Violation, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def check_walk(instance: Instance, route: Route, index: int = 0) -> None:
    """Raise ``StructuralError`` unless every step is a real, contiguous traversal."""
    edges = instance.edges
    prev_head = None
    for k, s in enumerate(route.steps):
        if not 0 <= s.edge < len(edges):
            raise StructuralError(f"route {index} step {k}: unknown edge id {s.edge}")
        e = edges[s.edge]
        if {s.tail, s.head} != {e.u, e.v}:
            raise StructuralError(
                f"route {index} step {k}: edge {s.edge} does not join {s.tail} and {s.head}"
            )
        if prev_head is not None and s.tail != prev_head:
            raise StructuralError(f"route {index} step {k}: walk is not contiguous")
        prev_head = s.head


def validate(instance: Instance, solution: Solution) -> Verdict:
    """Check every route and solution condition; structural defects raise."""
    violations: list[Violation] = []
    edges = instance.edges
    served_by: dict[int, list[int]] = {}
    for i, route in enumerate(solution.routes):
        check_walk(instance, route, i)
        if not route.steps:
            continue
        if route.steps[0].tail != route.steps[-1].head:
            violations.append(Violation(i, "walk is not closed"))
        if instance.depot not in route.vertices():
            violations.append(Violation(i, "walk does not pass through the depot"))
        load = 0
        counts = Counter(route.served_edges)
        for eid, n in sorted(counts.items()):
            if edges[eid].demand == 0:
                violations.append(Violation(i, f"edge {eid} has zero demand but is flagged served"))
            if n > 1:
                violations.append(Violation(i, f"edge {eid} flagged served {n} times"))
            load += edges[eid].demand
            served_by.setdefault(eid, []).append(i)
        if load > instance.capacity:
            violations.append(Violation(i, f"load {load} exceeds capacity {instance.capacity}"))
    for e in instance.required:
        routes = served_by.get(e.id, [])
        if not routes:
            violations.append(Violation(None, f"edge {e.id} unserved"))
        elif len(routes) > 1:
            violations.append(Violation(None, f"edge {e.id} served by {len(routes)} routes"))
    return Verdict(tuple(violations))
