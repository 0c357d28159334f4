"""Line-oriented text formats for instances and solutions.

Instance::

    carp 1
    vertices N depot D capacity W
    u v cost demand          # one line per edge, 1-based vertices

Solution::

    solution 1
    route
    edge-id from to served   # 1-based edge id (order of the edge lines)

``#`` starts a comment; blank lines are ignored.
"""

from __future__ import annotations

from .core import CarpError, Edge, Graph, Instance, Route, Solution, Step


class FormatError(CarpError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"line {line}:"
        super().__init__(f"{where} {message}" if where else message)


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield no, body.split()


def _ints(fields: list[str], no: int, source: str | None) -> list[int]:
    try:
        return [int(f, 10) for f in fields]
    except ValueError:
        raise FormatError(f"expected integers, got {' '.join(fields)!r}", no, source) from None


def parse_instance(text: str, source: str | None = None) -> Instance:
    lines = list(_lines(text))
    if not lines or lines[0][1] != ["carp", "1"]:
        raise FormatError("missing header 'carp 1'", lines[0][0] if lines else 1, source)
    if len(lines) < 2:
        raise FormatError("missing 'vertices N depot D capacity W' line", None, source)
    no, f = lines[1]
    if len(f) != 6 or f[0::2] != ["vertices", "depot", "capacity"]:
        raise FormatError("expected 'vertices N depot D capacity W'", no, source)
    n, depot, capacity = _ints(f[1::2], no, source)
    if n < 1:
        raise FormatError("vertex count must be positive", no, source)
    if not 1 <= depot <= n:
        raise FormatError(f"depot {depot} out of range 1..{n}", no, source)
    if capacity < 1:
        raise FormatError("capacity must be positive", no, source)
    edges = []
    seen: dict[tuple[int, int], int] = {}
    for no, f in lines[2:]:
        if len(f) != 4:
            raise FormatError("edge line needs 'u v cost demand'", no, source)
        u, v, cost, demand = _ints(f, no, source)
        if not (1 <= u <= n and 1 <= v <= n):
            raise FormatError(f"vertex out of range 1..{n}", no, source)
        if u == v:
            raise FormatError(f"self-loop at vertex {u}", no, source)
        if cost < 0 or demand < 0:
            raise FormatError("cost and demand must be non-negative", no, source)
        if demand > capacity:
            raise FormatError("edge demand exceeds capacity", no, source)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise FormatError(f"duplicate edge {u} {v} (first on line {seen[key]})", no, source)
        seen[key] = no
        edges.append(Edge(len(edges), u - 1, v - 1, cost, demand))
    try:
        return Instance(Graph(n, tuple(edges)), depot - 1, capacity)
    except CarpError as exc:
        raise FormatError(str(exc), None, source) from exc


def write_instance(instance: Instance) -> str:
    out = [
        "carp 1",
        f"vertices {instance.vertex_count} depot {instance.depot + 1} capacity {instance.capacity}",
    ]
    out.extend(f"{e.u + 1} {e.v + 1} {e.cost} {e.demand}" for e in instance.edges)
    return "\n".join(out) + "\n"


def parse_solution(text: str, instance: Instance, source: str | None = None) -> Solution:
    lines = list(_lines(text))
    if not lines or lines[0][1] != ["solution", "1"]:
        raise FormatError("missing header 'solution 1'", lines[0][0] if lines else 1, source)
    m = len(instance.edges)
    routes: list[list[Step]] = []
    for no, f in lines[1:]:
        if f == ["route"]:
            routes.append([])
            continue
        if not routes:
            raise FormatError("step before the first 'route' line", no, source)
        if len(f) != 4:
            raise FormatError("step line needs 'edge-id from to served'", no, source)
        eid, tail, head, served = _ints(f, no, source)
        if not 1 <= eid <= m:
            raise FormatError(f"step references unknown edge {eid}", no, source)
        if served not in (0, 1):
            raise FormatError("served flag must be 0 or 1", no, source)
        routes[-1].append(Step(eid - 1, tail - 1, head - 1, bool(served)))
    return Solution(tuple(Route(tuple(r)) for r in routes))


def write_solution(solution: Solution, instance: Instance | None = None) -> str:
    out = ["solution 1"]
    for route in solution.routes:
        out.append("route")
        out.extend(
            f"{s.edge + 1} {s.tail + 1} {s.head + 1} {int(s.served)}" for s in route.steps
        )
    return "\n".join(out) + "\n"
