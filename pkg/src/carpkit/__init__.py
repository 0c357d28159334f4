"""Capacitated arc routing: metric closure reduction, exact oracle and approximation."""

from .approx import (
    GiantTour,
    SolveReport,
    SplitPlan,
    approximate_metric,
    build_giant_tour,
    lower_bound,
    solve,
    split_optimally,
)
from .core import (
    CarpError,
    CostFunction,
    Edge,
    Graph,
    Instance,
    Route,
    Solution,
    Step,
    Verdict,
    route_cost,
    solution_cost,
    validate,
)
from .exact import ExactResult, best_route_for_set, solve_exact
from .formats import parse_instance, parse_solution, write_instance, write_solution
from .generate import generate_random, random_solution
from .reduction import (
    ReductionArtifacts,
    lift_solution,
    metric_closure,
    normalize_solution,
    observation_gap,
    observation_gap_check,
    reduced_instance,
)
from .tsp import TspInstance, fig1_instance, tsp_to_carp

__version__ = "0.1.0"
