"""Command-line front end.

Exit codes: 0 success, 1 validation or input failure, 2 usage error.
Paths may be ``-`` for stdin/stdout.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .approx import lower_bound, solve
from .core import DOWN_TRIANGLE, FULL_TRIANGLE, CarpError, CostFunction, solution_cost, validate
from .exact import DEFAULT_LIMIT, OracleLimitError, solve_exact
from .formats import parse_instance, parse_solution, write_instance, write_solution
from .generate import generate_random
from .reduction import metric_closure, reduced_instance
from .tsp import fig1_instance

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _load_instance(path: str):
    return parse_instance(_read(path), source=path)


def _emit(lines: list[str], to_stderr: bool = False) -> None:
    stream = sys.stderr if to_stderr else sys.stdout
    stream.write("\n".join(lines) + "\n")


def cmd_solve(args) -> int:
    instance = _load_instance(args.instance)
    final, report = solve(instance, oracle_limit=args.limit)
    if args.output:
        _write(args.output, write_solution(final, instance))
    lines = report.lines()
    if args.verbose:
        lines.append(
            f"# {report.routes} route(s), cost {report.final_cost} = metric {report.metric_cost} + r {report.r}"
        )
        if report.exact_note:
            lines.append(f"# {report.exact_note}")
    _emit(lines, to_stderr=args.output == "-")
    if report.matching_heuristic:
        print("warning: matching heuristic engaged; factor bound unverified", file=sys.stderr)
    return EXIT_OK if report.verdict.ok and report.identity_holds else EXIT_INVALID


def cmd_reduce(args) -> int:
    instance = _load_instance(args.instance)
    artifacts = metric_closure(instance)
    _write(args.output, write_instance(reduced_instance(instance, artifacts, args.mode)))
    return EXIT_OK


def cmd_verify(args) -> int:
    instance = _load_instance(args.instance)
    solution = parse_solution(_read(args.solution), instance, source=args.solution)
    try:
        verdict = validate(instance, solution)
    except CarpError as exc:
        print(f"verdict invalid\nviolation {exc}")
        return EXIT_INVALID
    artifacts = metric_closure(instance)
    lines = [f"verdict {'ok' if verdict.ok else 'invalid'}"]
    lines += [f"violation {v}" for v in verdict.violations]
    lines += [
        f"cost_original {solution_cost(solution, artifacts.original)}",
        f"cost_down_triangle {solution_cost(solution, artifacts.down_triangle)}",
        f"cost_full_triangle {solution_cost(solution, artifacts.full_triangle)}",
        f"r {artifacts.r}",
    ]
    _emit(lines)
    return EXIT_OK if verdict.ok else EXIT_INVALID


def cmd_exact(args) -> int:
    instance = _load_instance(args.instance)
    try:
        result = solve_exact(instance, CostFunction.original(instance), limit=args.limit)
    except OracleLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _emit([f"optimum {result.optimum}", f"explored {result.explored}"])
    if args.output:
        _write(args.output, write_solution(result.witness, instance))
    else:
        sys.stdout.write(write_solution(result.witness, instance))
    return EXIT_OK


def cmd_bound(args) -> int:
    instance = _load_instance(args.instance)
    artifacts = metric_closure(instance)
    metric = reduced_instance(instance, artifacts, FULL_TRIANGLE)
    lb = lower_bound(metric, artifacts)
    _emit([f"lower_bound {lb + artifacts.r}", f"lower_bound_metric {lb}", f"r {artifacts.r}"])
    return EXIT_OK


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("CARPKIT_SEED")
    if env is None:
        raise UsageError("no --seed given and CARPKIT_SEED is unset")
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"CARPKIT_SEED is not an integer: {env!r}") from None


def cmd_gen(args) -> int:
    try:
        instance = generate_random(
            _seed(args),
            args.vertices,
            args.p,
            args.max_cost,
            args.max_demand,
            args.capacity,
            required_edges=args.required,
        )
    except ValueError as exc:
        if isinstance(exc, CarpError):
            raise
        raise UsageError(str(exc)) from None
    _write(args.output, write_instance(instance))
    return EXIT_OK


def cmd_fig1(args) -> int:
    _write(args.output, write_instance(fig1_instance(args.ell, args.capacity)))
    return EXIT_OK


def _sweep_one(params: tuple) -> str:
    seed, vertices, p, max_cost, max_demand, capacity, required, limit = params
    instance = generate_random(
        seed, vertices, p, max_cost, max_demand, capacity, required_edges=required
    )
    _, rep = solve(instance, oracle_limit=limit)
    ratio = rep.ratio
    return (
        f"seed {seed} final {rep.final_cost} metric {rep.metric_cost} r {rep.r} "
        f"exact {'-' if rep.exact_optimum is None else rep.exact_optimum} "
        f"ratio {'-' if ratio is None else f'{float(ratio):.6f}'} "
        f"status {'ok' if rep.verdict.ok and rep.identity_holds else 'invalid'}"
    )


def cmd_sweep(args) -> int:
    params = [
        (s, args.vertices, args.p, args.max_cost, args.max_demand, args.capacity, args.required, args.limit)
        for s in range(args.seed_from, args.seed_to + 1)
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            lines = list(pool.map(_sweep_one, params))
    else:
        lines = [_sweep_one(p) for p in params]
    _write(args.output, "\n".join(lines) + "\n")
    return EXIT_OK if all(line.endswith("status ok") for line in lines) else EXIT_INVALID


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="carpkit", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="human-readable extras")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="approximate via metric closure, normalize and lift")
    p.add_argument("instance")
    p.add_argument("-o", "--output", help="write the solution here")
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT, help="oracle limit (0 disables)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reduce", help="write the instance under modified costs")
    p.add_argument("instance")
    p.add_argument("--mode", choices=(DOWN_TRIANGLE, FULL_TRIANGLE), default=FULL_TRIANGLE)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="validate a solution and report its costs")
    p.add_argument("instance")
    p.add_argument("solution")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("exact", help="brute-force optimum with witness")
    p.add_argument("instance")
    p.add_argument("-o", "--output", help="write the witness here instead of stdout")
    p.add_argument("--limit", type=_positive, default=DEFAULT_LIMIT)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("bound", help="lower bound on the optimum")
    p.add_argument("instance")
    p.set_defaults(func=cmd_bound)

    def gen_flags(q: argparse.ArgumentParser) -> None:
        q.add_argument("--vertices", type=_positive, default=8)
        q.add_argument("--p", type=float, default=0.5, help="edge probability")
        q.add_argument("--max-cost", type=_positive, default=20)
        q.add_argument("--max-demand", type=_positive, default=3)
        q.add_argument("--capacity", type=_positive, default=5)
        q.add_argument("--required", type=int, default=None, help="exact number of required edges")

    p = sub.add_parser("gen", help="seeded random instance")
    p.add_argument("--seed", type=int, default=None, help="falls back to $CARPKIT_SEED")
    gen_flags(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("fig1", help="the K4 counterexample pushed through the vertex-splitting reduction")
    p.add_argument("--ell", type=_positive, default=1000)
    p.add_argument("--capacity", type=_positive, default=None)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_fig1)

    p = sub.add_parser("sweep", help="solve a range of seeded instances")
    p.add_argument("--seed-from", type=int, default=1)
    p.add_argument("--seed-to", type=int, default=20)
    gen_flags(p)
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sweep, required=5)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CarpError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
