"""Pipeline cost over exact optimum on seeded random instances, grouped by capacity."""

import argparse
from collections import defaultdict
from fractions import Fraction

from carpkit.approx import factor_bound, solve
from carpkit.generate import generate_random


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=200)
    ap.add_argument("--vertices", type=int, default=8)
    ap.add_argument("--required", type=int, default=5)
    ap.add_argument("--capacity", type=int, nargs="+", default=[2, 3, 4, 5])
    args = ap.parse_args()
    stats = defaultdict(list)
    for W in args.capacity:
        for seed in range(1, args.seeds + 1):
            inst = generate_random(seed, args.vertices, 0.5, 20, min(3, W), W, required_edges=args.required)
            _, rep = solve(inst)
            if rep.exact_optimum:
                stats[W].append((rep.ratio, rep.r > 0))
    print(f"{'W':>3} {'n':>5} {'mean':>8} {'worst':>8} {'bound':>8} {'r>0':>5}")
    for W, rows in sorted(stats.items()):
        ratios = [r for r, _ in rows]
        mean = sum(ratios, Fraction(0)) / len(ratios)
        print(
            f"{W:>3} {len(rows):>5} {float(mean):>8.4f} {float(max(ratios)):>8.4f} "
            f"{float(factor_bound(W)):>8.4f} {sum(f for _, f in rows):>5}"
        )


if __name__ == "__main__":
    main()
