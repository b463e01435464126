"""Matchings, the exact min-cost oracle and optimality predicates."""

from rematch.matching.brute_force import MAX_BRUTE_FORCE_CLIENTS, brute_force_matching
from rematch.matching.dto import AssignmentProblem, Augmentation, Matching, OptResult
from rematch.matching.solver import IncrementalSolver, min_cost_matching
from rematch.matching.utils import (
    cost_eq,
    cost_le,
    is_server_optimal,
    line_cost_by_intervals,
    matching_cost,
)

__all__ = [
    "MAX_BRUTE_FORCE_CLIENTS",
    "AssignmentProblem",
    "Augmentation",
    "IncrementalSolver",
    "Matching",
    "OptResult",
    "brute_force_matching",
    "cost_eq",
    "cost_le",
    "is_server_optimal",
    "line_cost_by_intervals",
    "matching_cost",
    "min_cost_matching",
]
