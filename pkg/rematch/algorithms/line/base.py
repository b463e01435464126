"""Shared driver for the line algorithms built on Permutation's server choice."""

from abc import abstractmethod
from collections.abc import Sequence

from rematch.algorithms.base import OnlineAlgorithm
from rematch.algorithms.dto import StepChanges, StepResult
from rematch.algorithms.line.arcs import (
    Direction,
    IntervalStats,
    check_no_free_server_inside_arcs,
    interval_decomposition,
    make_arc,
)
from rematch.algorithms.permutation import Permutation
from rematch.errors import MetricError
from rematch.matching import Matching
from rematch.metrics import Distance, LineMetric, MetricSpace, PointId


class LineAlgorithm(OnlineAlgorithm):
    """Line-metric algorithm: s_t comes from an inner Permutation, forward arcs are added
    as they are and backward arcs go through the subclass's cancellation."""

    ALGORITHM_ID = "line"  # abstract, never registered

    def __init__(self, metric: MetricSpace, servers: Sequence[PointId]) -> None:
        if not isinstance(metric, LineMetric):
            raise MetricError(
                f"{self.ALGORITHM_ID} runs on a line metric, got {metric.METRIC_KIND}"
            )
        super().__init__(metric, servers)
        self.line = metric
        self._inner = Permutation(metric, self.servers)
        self._matching = Matching(metric)
        self.backward_pairs: dict[PointId, PointId] = {}
        self.last_changes = StepChanges()
        self._moved_backward: list[tuple[PointId, PointId, PointId]] = []

    @property
    def matching(self) -> Matching:
        return self._matching

    @property
    def used_servers(self) -> frozenset[PointId]:
        return self._inner.used_servers

    @property
    def optimal_cost(self) -> Distance:
        return self._inner.optimal_cost

    @property
    def free_servers(self) -> frozenset[PointId]:
        return frozenset(self.servers) - self._matching.servers()

    def _add_forward(self, client: PointId, server: PointId) -> None:
        self._matching.match(client, server)

    @abstractmethod
    def _add_backward(self, client: PointId, server: PointId) -> None: ...

    def arrive(self, client: PointId) -> StepResult:
        before = dict(self._matching.pairs())
        server, _ = self._inner.arrive_one(client)

        if make_arc(self.line, client, server).direction == Direction.FORWARD:
            self._add_forward(client, server)
        else:
            self._add_backward(client, server)

        after = dict(self._matching.pairs())
        owner_before = {s: c for c, s in before.items()}
        owner_after = {s: c for c, s in after.items()}
        changes = StepChanges(
            client_moves=[(c, before.get(c), s) for c, s in after.items() if before.get(c) != s],
            server_moves=[
                (s, owner_before.get(s), c)
                for s, c in owner_after.items()
                if owner_before.get(s) != c
            ],
        )
        self.last_changes = changes

        self._moved_backward = [
            (c, s, after[c]) for c, s in self.backward_pairs.items() if after.get(c) != s
        ]
        self.backward_pairs = {
            c: s
            for c, s in after.items()
            if make_arc(self.line, c, s).direction == Direction.BACKWARD
        }

        rematched = sorted(c for c, _, _ in changes.client_moves if c != client)
        if rematched:
            self.logger.debug(f"client {client} -> server {server}; rematched {rematched}")
        return StepResult(recourse=len(rematched) + 1, rematched=rematched, server=server)

    def intervals(self) -> list[IntervalStats]:
        return interval_decomposition(self._matching)

    def check_no_free_server_inside_arcs(self) -> str | None:
        return check_no_free_server_inside_arcs(self._matching, self.free_servers)

    def check_backward_final(self) -> str | None:
        """Clients on backward arcs before the last step still hold the same server."""
        for client, old, new in self._moved_backward:
            return f"client {client} left its backward server {old} for {new}"
        return None

    @abstractmethod
    def check_arc_motion(self) -> str | None:
        """How rematched pairs may move in the last step."""
        ...
