"""Exhaustive matching oracle for tiny instances."""

import itertools
import math

from rematch.errors import SizeError
from rematch.matching.dto import AssignmentProblem, Matching, OptResult
from rematch.metrics import Distance

# Enumeration is |S|! / (|S| - k)!; nine clients is already ~3.6M injections on ten servers
MAX_BRUTE_FORCE_CLIENTS = 9


def brute_force_matching(problem: AssignmentProblem) -> OptResult:
    """Enumerate every injection clients → servers and keep the first cheapest one."""
    k = len(problem.clients)
    if k > MAX_BRUTE_FORCE_CLIENTS:
        raise SizeError(f"brute force supports at most {MAX_BRUTE_FORCE_CLIENTS} clients, got {k}")

    metric = problem.metric
    servers = sorted(problem.servers)
    table = [[metric.distance(c, s) for s in servers] for c in problem.clients]

    best_cost: Distance | None = None
    best_choice: tuple[int, ...] = ()
    for choice in itertools.permutations(range(len(servers)), k):
        parts = [table[i][j] for i, j in enumerate(choice)]
        cost = sum(parts, 0) if metric.is_exact else math.fsum(parts)
        if best_cost is None or cost < best_cost:
            best_cost = cost
            best_choice = choice

    pairs = [(c, servers[j]) for c, j in zip(problem.clients, best_choice, strict=True)]
    matching = Matching(metric, pairs)
    return OptResult(
        matching=matching,
        cost=best_cost if best_cost is not None else 0,
        used_servers=frozenset(s for _, s in pairs),
    )
