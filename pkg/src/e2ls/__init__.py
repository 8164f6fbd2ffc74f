"""Local-search solver for the set-union knapsack problem and the budgeted
maximum coverage problem.
"""

from .construct import random_greedy
from .engine import available_backends, default_backend, make_engine
from .instance import (Instance, InstanceFormatError, InstanceStats,
                       ProblemKind, compute_stats, generate_grouped,
                       generate_uniform, instance_name, load_instance,
                       parse_dense, parse_instance, serialize_instance)
from .oracle import brute_force, plain_greedy
from .search import RunRecord, SearchParams, add_star, local_search, solve
from .state import RatioKey, SolutionState
from .tabu import TabuStore, build_weights, hash_solution

__version__ = "0.1.0"

__all__ = [
    "Instance", "InstanceFormatError", "InstanceStats", "ProblemKind",
    "RatioKey", "RunRecord", "SearchParams", "SolutionState", "TabuStore",
    "add_star", "available_backends", "brute_force", "build_weights",
    "compute_stats", "default_backend", "generate_grouped",
    "generate_uniform", "hash_solution", "instance_name", "load_instance",
    "local_search", "make_engine", "parse_dense", "parse_instance",
    "plain_greedy", "random_greedy", "serialize_instance", "solve",
]
