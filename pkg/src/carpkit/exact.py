"""Brute-force exact CARP for desk-scale instances.

Required edges are partitioned into capacity-feasible blocks (restricted
growth strings); the cheapest depot-rooted closed walk for every subset of
required edges comes from one Held-Karp table over (served subset, last
service, orientation) with moves priced at shortest-path distance.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import CarpError, CostFunction, Instance, Route, Solution, Step
from .reduction import INF, shortest_paths

DEFAULT_LIMIT = 8


class OracleLimitError(CarpError):
    pass


class InfeasibleBlockError(CarpError):
    pass


@dataclass(frozen=True)
class ExactResult:
    optimum: int
    witness: Solution
    explored: int


class _HeldKarp:
    """Cheapest closed walk from the depot serving exactly each subset of ``services``."""

    def __init__(self, instance: Instance, cf: CostFunction, services: list[int]):
        self.instance = instance
        self.cf = cf
        self.services = services
        g = instance.graph
        self.dist, self.pred = shortest_paths(
            g.vertex_count, ((e.u, e.v, cf(e.id)) for e in g.edges)
        )
        k = len(services)
        depot = instance.depot
        dist = self.dist
        # ends[i][o] = (entry vertex, exit vertex) for service i in orientation o;
        # orientation 0 enters at the smaller vertex index
        ends = []
        for eid in services:
            e = g.edges[eid]
            a, b = sorted((e.u, e.v))
            ends.append(((a, b), (b, a)))
        self.ends = ends
        size = 1 << k
        f = [[[INF, INF] for _ in range(k)] for _ in range(size)]
        parent: list[list[list]] = [[[None, None] for _ in range(k)] for _ in range(size)]
        for i in range(k):
            c = cf(services[i])
            for o in (0, 1):
                f[1 << i][i][o] = dist[depot][ends[i][o][0]] + c
        for mask in range(1, size):
            fm = f[mask]
            for i in range(k):
                if not mask >> i & 1:
                    continue
                for o in (0, 1):
                    base = fm[i][o]
                    if base == INF:
                        continue
                    out = ends[i][o][1]
                    drow = dist[out]
                    for j in range(k):
                        if mask >> j & 1:
                            continue
                        cj = cf(services[j])
                        nxt = mask | 1 << j
                        for oj in (0, 1):
                            val = base + drow[ends[j][oj][0]] + cj
                            if val < f[nxt][j][oj]:
                                f[nxt][j][oj] = val
                                parent[nxt][j][oj] = (i, o)
        self.f = f
        self.parent = parent
        self.closed: list = [INF] * size
        self.last: list = [None] * size
        self.closed[0] = 0
        for mask in range(1, size):
            best, arg = INF, None
            for i in range(k):
                if not mask >> i & 1:
                    continue
                for o in (0, 1):
                    val = f[mask][i][o] + dist[ends[i][o][1]][depot]
                    if val < best:
                        best, arg = val, (i, o)
            self.closed[mask] = best
            self.last[mask] = arg

    def order(self, mask: int) -> list[tuple[int, int]]:
        seq = []
        cur = self.last[mask]
        while cur is not None:
            seq.append(cur)
            i, o = cur
            prev = self.parent[mask][i][o]
            mask &= ~(1 << i)
            cur = prev
        seq.reverse()
        return seq

    def _path(self, s: int, t: int) -> list[Step]:
        steps = []
        g = self.instance.graph
        row = self.pred[s]
        x = t
        while x != s:
            p = row[x]
            steps.append(Step(g.edge_between(p, x).id, p, x, False))
            x = p
        steps.reverse()
        return steps

    def route(self, mask: int) -> Route:
        if mask == 0:
            return Route()
        steps: list[Step] = []
        here = self.instance.depot
        for i, o in self.order(mask):
            a, b = self.ends[i][o]
            steps.extend(self._path(here, a))
            steps.append(Step(self.services[i], a, b, True))
            here = b
        steps.extend(self._path(here, self.instance.depot))
        return Route(tuple(steps))


def _check_limit(k: int, limit: int) -> None:
    if k > limit:
        raise OracleLimitError(
            f"exact oracle refuses {k} required edges (limit {limit})"
        )


def best_route_for_set(
    instance: Instance, cf: CostFunction, edge_ids, limit: int = DEFAULT_LIMIT
) -> tuple[int, Route]:
    """Cheapest depot-rooted closed walk serving exactly ``edge_ids``."""
    services = sorted(set(edge_ids))
    _check_limit(len(services), limit)
    for eid in services:
        if instance.edges[eid].demand <= 0:
            raise ValueError(f"edge {eid} has no demand")
    if sum(instance.edges[e].demand for e in services) > instance.capacity:
        raise InfeasibleBlockError("block demand exceeds capacity")
    hk = _HeldKarp(instance, cf, services)
    full = (1 << len(services)) - 1
    return hk.closed[full], hk.route(full)


def solve_exact(
    instance: Instance, cf: CostFunction | None = None, limit: int = DEFAULT_LIMIT
) -> ExactResult:
    """Optimal CARP solution under ``cf`` (original costs by default)."""
    if cf is None:
        cf = CostFunction.original(instance)
    services = [e.id for e in instance.required]
    k = len(services)
    _check_limit(k, limit)
    if k == 0:
        return ExactResult(0, Solution(), 1)
    hk = _HeldKarp(instance, cf, services)
    demand = [instance.edges[e].demand for e in services]
    W = instance.capacity

    best = INF
    best_blocks: list[int] = []
    explored = 0
    blocks: list[int] = []
    loads: list[int] = []

    # restricted growth: item i joins an existing block or opens the next one
    def extend(i: int) -> None:
        nonlocal best, best_blocks, explored
        if i == k:
            explored += 1
            total = sum(hk.closed[m] for m in blocks)
            if total < best:
                best, best_blocks = total, list(blocks)
            return
        for b in range(len(blocks)):
            if loads[b] + demand[i] <= W:
                blocks[b] |= 1 << i
                loads[b] += demand[i]
                extend(i + 1)
                blocks[b] &= ~(1 << i)
                loads[b] -= demand[i]
        blocks.append(1 << i)
        loads.append(demand[i])
        extend(i + 1)
        blocks.pop()
        loads.pop()

    extend(0)
    witness = Solution(tuple(hk.route(m) for m in best_blocks))
    return ExactResult(int(best), witness, explored)
