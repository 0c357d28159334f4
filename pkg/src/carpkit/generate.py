"""Seeded instance and solution generators.

Randomness comes from xorshift64* so streams can be reproduced in any
language:

* the state is initialised with one splitmix64 step of the seed
  (increment 0x9E3779B97F4A7C15, multipliers 0xBF58476D1CE4E5B9 and
  0x94D049BB133111EB, shifts 30/27/31); a zero state is replaced by the
  increment;
* each draw applies ``x ^= x >> 12; x ^= x << 25; x ^= x >> 27`` on 64 bits
  and returns ``x * 0x2545F4914F6CDD1D mod 2**64``;
* ``below(n)`` rejects draws at or above ``2**64 - 2**64 % n`` and returns
  the draw modulo ``n``; ``uniform()`` is ``(draw >> 11) * 2**-53``.
"""

from __future__ import annotations

from .core import CarpError, DisconnectedInstanceError, Edge, Graph, Instance, Route, Solution, Step
from .reduction import ReductionArtifacts

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    z = (x + GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class XorShift64Star:
    def __init__(self, seed: int):
        self.state = splitmix64(seed & MASK64) or GOLDEN

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & MASK64

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - (1 << 64) % n
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


class GenerationError(CarpError):
    pass


def generate_random(
    seed: int,
    vertex_count: int,
    edge_probability: float,
    max_cost: int,
    max_demand: int,
    capacity: int,
    *,
    required_edges: int | None = None,
    max_attempts: int = 100,
) -> Instance:
    """Random simple graph on ``vertex_count`` vertices with depot 0.

    Each vertex pair ``(i, j)``, ``i < j`` in lexicographic order, becomes an
    edge with probability ``edge_probability`` and cost in ``1..max_cost``.
    Without ``required_edges`` every edge draws a demand in ``0..max_demand``;
    with it, exactly that many edges (chosen by shuffle) get a demand in
    ``1..max_demand`` and the rest get zero.  Attempts whose required edges
    are not reachable from the depot are discarded and drawing continues from
    the same stream.
    """
    if vertex_count < 2 or max_cost < 1 or max_demand < 1 or capacity < 1:
        raise ValueError("vertex count >= 2 and positive cost, demand and capacity bounds required")
    if not 0.0 < edge_probability <= 1.0:
        raise ValueError("edge probability must lie in (0, 1]")
    if capacity < max_demand:
        raise ValueError("capacity must be at least the maximum demand")
    rng = XorShift64Star(seed)
    n = vertex_count
    for _ in range(max_attempts):
        raw = []
        for i in range(n):
            for j in range(i + 1, n):
                if rng.uniform() < edge_probability:
                    raw.append([i, j, rng.randint(1, max_cost), 0])
        if required_edges is None:
            for rec in raw:
                rec[3] = rng.below(max_demand + 1)
        else:
            if len(raw) < required_edges:
                continue
            order = list(range(len(raw)))
            rng.shuffle(order)
            for idx in sorted(order[:required_edges]):
                raw[idx][3] = rng.randint(1, max_demand)
        edges = tuple(Edge(k, u, v, c, d) for k, (u, v, c, d) in enumerate(raw))
        try:
            return Instance(Graph(n, edges), 0, capacity)
        except DisconnectedInstanceError:
            continue
    raise GenerationError("could not generate connected instance")


def random_solution(
    instance: Instance,
    artifacts: ReductionArtifacts,
    seed: int,
    *,
    detour_probability: float = 0.5,
    bounce_probability: float = 0.5,
) -> Solution:
    """A random feasible solution built from explicit edges.

    Required edges are shuffled and cut into capacity-feasible routes.  Moves
    between services take a few random hops before following a stored
    shortest path, and a served edge is sometimes deadheaded back and forth
    right after service, so required edges are also crossed without serving.
    """
    rng = XorShift64Star(seed)
    graph = instance.graph
    depot = instance.depot
    req = [e.id for e in instance.required]
    rng.shuffle(req)
    blocks: list[list[int]] = []
    load = instance.capacity + 1
    for eid in req:
        d = instance.edges[eid].demand
        if load + d > instance.capacity or rng.uniform() < 0.25:
            blocks.append([])
            load = 0
        blocks[-1].append(eid)
        load += d

    def travel(here: int, target: int, steps: list[Step]) -> None:
        if rng.uniform() < detour_probability:
            for _ in range(rng.randint(1, 3)):
                nbrs = graph.adjacency[here]
                if not nbrs:
                    break
                nxt, eid = nbrs[rng.below(len(nbrs))]
                steps.append(Step(eid, here, nxt, False))
                here = nxt
        steps.extend(artifacts.path(here, target))

    routes = []
    for block in blocks:
        steps: list[Step] = []
        here = depot
        for eid in block:
            e = instance.edges[eid]
            a, b = (e.u, e.v) if rng.below(2) == 0 else (e.v, e.u)
            travel(here, a, steps)
            steps.append(Step(eid, a, b, True))
            if rng.uniform() < bounce_probability:
                steps.append(Step(eid, b, a, False))
                steps.append(Step(eid, a, b, False))
            here = b
        travel(here, depot, steps)
        routes.append(Route(tuple(steps)))
    return Solution(tuple(routes))
