"""RecursiveCancel: backward arcs steal the overlapping forward arc with the rightmost
server, one at a time. Reference for FarthestServer and home of the redundancy labels."""

from collections.abc import Sequence

from rematch.algorithms.line.base import LineAlgorithm
from rematch.algorithms.line.cancel import recursive_cancel
from rematch.algorithms.line.redundancy import (
    RedundancyLabeling,
    RedundancyLedger,
    check_redundant_cost,
    check_redundant_counts,
    check_suffix_domination,
)
from rematch.metrics import MetricSpace, PointId


class RecursiveCancel(LineAlgorithm):
    ALGORITHM_ID = "recursive-cancel"

    def __init__(self, metric: MetricSpace, servers: Sequence[PointId]) -> None:
        super().__init__(metric, servers)
        self.ledger = RedundancyLedger(self.line)
        self.cascades: list[int] = []

    def _add_forward(self, client: PointId, server: PointId) -> None:
        self.ledger.label_new_forward(self._matching, client, server)
        super()._add_forward(client, server)

    def _add_backward(self, client: PointId, server: PointId) -> None:
        written = recursive_cancel(self._matching, client, server, self.ledger.transfer)
        self.cascades.append(len(written) - 1)
        self.logger.debug(f"cascade of {len(written) - 1} steal(s): {written}")

    def label_redundancy(self) -> RedundancyLabeling:
        return self.ledger.labeling(self._matching)

    def check_redundancy(self) -> str | None:
        labeling = self.label_redundancy()
        return (
            check_redundant_counts(self._matching, labeling)
            or check_suffix_domination(labeling)
            or check_redundant_cost(labeling)
        )

    def check_arc_motion(self) -> str | None:
        """A server's client only ever moves right."""
        for server, old, new in self.last_changes.server_moves:
            if old is None:
                continue
            if self.line.coordinate(new) < self.line.coordinate(old):
                return f"server {server} moved left from client {old} to {new}"
        return None
