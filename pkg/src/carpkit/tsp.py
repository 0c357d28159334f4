"""The vertex-splitting transformation from TSP to CARP and the K4 counterexample."""

from __future__ import annotations

from dataclasses import dataclass

from .core import CarpError, Edge, Graph, Instance


@dataclass(frozen=True)
class TspInstance:
    vertex_count: int
    costs: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = self.vertex_count
        object.__setattr__(self, "costs", tuple(tuple(row) for row in self.costs))
        if n < 1 or len(self.costs) != n or any(len(row) != n for row in self.costs):
            raise CarpError("cost table must be n x n")
        for i in range(n):
            if self.costs[i][i] != 0:
                raise CarpError(f"non-zero diagonal at {i}")
            for j in range(i + 1, n):
                c = self.costs[i][j]
                if c != self.costs[j][i]:
                    raise CarpError(f"asymmetric cost between {i} and {j}")
                if not isinstance(c, int) or c <= 0:
                    raise CarpError(f"cost between {i} and {j} must be a positive integer")

    def tour_cost(self, order) -> int:
        order = list(order)
        return sum(self.costs[a][b] for a, b in zip(order, order[1:] + order[:1]))


def tsp_to_carp(tsp: TspInstance, capacity: int | None = None) -> Instance:
    """Split vertex i into copies 2i and 2i+1 joined by a demand-one, cost-zero edge.

    Every TSP edge {i, j} becomes the four edges between the copies of i and
    the copies of j, each with the TSP cost and zero demand.  The depot is
    the first copy of vertex 0 and capacity defaults to the vertex count.
    """
    n = tsp.vertex_count
    if capacity is None:
        capacity = n
    if capacity < n:
        raise CarpError(f"capacity {capacity} is below the vertex count {n}")
    raw = [(2 * i, 2 * i + 1, 0, 1) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            for a in (0, 1):
                for b in (0, 1):
                    raw.append((2 * i + a, 2 * j + b, tsp.costs[i][j], 0))
    edges = tuple(Edge(k, u, v, c, d) for k, (u, v, c, d) in enumerate(raw))
    return Instance(Graph(2 * n, edges), 0, capacity)


def fig1_tsp(ell: int) -> TspInstance:
    """K4 with a unit-cost Hamiltonian path v1-v4-v3-v2 and the other three edges at ``ell``."""
    if ell < 1:
        raise CarpError("ell must be a positive integer")
    c = [[0] * 4 for _ in range(4)]
    unit = [(0, 3), (2, 3), (1, 2)]
    heavy = [(0, 1), (0, 2), (1, 3)]
    for pairs, w in ((unit, 1), (heavy, ell)):
        for a, b in pairs:
            c[a][b] = c[b][a] = w
    return TspInstance(4, tuple(tuple(r) for r in c))


def fig1_instance(ell: int, capacity: int | None = None) -> Instance:
    return tsp_to_carp(fig1_tsp(ell), capacity)
