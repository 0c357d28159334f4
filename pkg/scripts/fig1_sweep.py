"""TSP tour cost versus CARP optimum on the vertex-split K4 as ell grows."""

import argparse
import itertools

from carpkit.approx import solve
from carpkit.exact import solve_exact
from carpkit.tsp import fig1_instance, fig1_tsp


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ell", type=int, nargs="+", default=[1, 2, 3, 10, 100, 1000, 10**6])
    args = ap.parse_args()
    print(f"{'ell':>8} {'tsp':>8} {'carp_opt':>9} {'pipeline':>9}")
    for ell in args.ell:
        tsp = fig1_tsp(ell)
        tour = min(tsp.tour_cost((0,) + p) for p in itertools.permutations(range(1, 4)))
        inst = fig1_instance(ell)
        opt = solve_exact(inst).optimum
        _, rep = solve(inst)
        print(f"{ell:>8} {tour:>8} {opt:>9} {rep.final_cost:>9}")


if __name__ == "__main__":
    main()
