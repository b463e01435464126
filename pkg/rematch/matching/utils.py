"""Cost helpers shared by algorithms and checks."""

from collections.abc import Iterable

from rematch.errors import ContractError
from rematch.matching.dto import AssignmentProblem, Matching, sum_distances
from rematch.matching.solver import min_cost_matching
from rematch.metrics import REL_TOL, Distance, LineMetric, MetricSpace, PointId


def matching_cost(matching: Matching, metric: MetricSpace) -> Distance:
    """Sum of pair distances, recomputed from scratch."""
    return sum_distances(metric, matching.pairs())


def cost_le(a: Distance, b: Distance, exact: bool) -> bool:
    """a ≤ b, with relative slack on float metrics."""
    if exact:
        return a <= b
    return a <= b + REL_TOL * max(abs(a), abs(b), 1.0)


def cost_eq(a: Distance, b: Distance, exact: bool) -> bool:
    return cost_le(a, b, exact) and cost_le(b, a, exact)


def is_server_optimal(matching: Matching, problem: AssignmentProblem) -> bool:
    """True iff the matching's server set is the server set of some optimal matching.

    Tested as: optimal cost restricted to the used servers equals the unrestricted optimum.
    """
    if matching.clients() != frozenset(problem.clients):
        raise ContractError("matching does not cover exactly the problem's clients")

    used = matching.servers()
    if not used <= frozenset(problem.servers):
        return False

    restricted = AssignmentProblem(problem.clients, tuple(sorted(used)), problem.metric)
    return cost_eq(
        min_cost_matching(restricted).cost,
        min_cost_matching(problem).cost,
        problem.metric.is_exact,
    )


def line_cost_by_intervals(
    metric: LineMetric, clients: Iterable[PointId], servers: Iterable[PointId]
) -> int:
    """Σ over gaps between consecutive points of |disc| · gap length.

    Equals the optimal cost when `servers` is an optimal server set for `clients`.
    """
    marks = sorted(
        [(metric.coordinate(c), -1) for c in clients]
        + [(metric.coordinate(s), +1) for s in servers]
    )
    total = 0
    disc = 0
    for (x, sign), (x_next, _) in zip(marks, marks[1:], strict=False):
        disc += sign
        total += abs(disc) * (x_next - x)
    return total
