"""ampboost: amplitude-amplification workbench for QUBO-style cost landscapes.

Encode a cost function as a diagonal phase oracle, simulate the
amplify-measure loop exactly (with degeneracy-class compression), estimate
the phase scale from samples, map the probability-vs-scale resonance
structure, and drive a hybrid quantum-greedy solver.
"""

from .backend import BACKEND
from .engine import grover_iterations, measure, run_amplification
from .errors import AmpboostError
from .estimator import estimate_ps, sample_costs
from .hybrid import greedy_descent, hybrid_solve, subset_sum_query, verify_minimum
from .problems import (
    Problem,
    coloring,
    evaluate_cost,
    generate_linear_qubo,
    generate_random_graph,
    linear_qubo,
    maxcut,
    subset_sum,
)
from .spectrum import SolutionSpace, enumerate_space, exact_ps, stats
from .sweep import correlation_points, find_peak, fit_correlation, sweep

__version__ = "1.0.0"

__all__ = [
    "AmpboostError",
    "BACKEND",
    "Problem",
    "SolutionSpace",
    "__version__",
    "coloring",
    "correlation_points",
    "enumerate_space",
    "estimate_ps",
    "evaluate_cost",
    "exact_ps",
    "find_peak",
    "fit_correlation",
    "generate_linear_qubo",
    "generate_random_graph",
    "greedy_descent",
    "grover_iterations",
    "hybrid_solve",
    "linear_qubo",
    "maxcut",
    "measure",
    "run_amplification",
    "sample_costs",
    "stats",
    "subset_sum",
    "subset_sum_query",
    "sweep",
    "verify_minimum",
]
