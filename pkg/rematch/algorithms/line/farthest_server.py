"""FarthestServer: backward arcs cancel their overlap region in a single sweep."""

from collections.abc import Sequence

from rematch.algorithms.line.base import LineAlgorithm
from rematch.algorithms.line.cancel import farthest_server_cancel
from rematch.algorithms.line.sweep import SweepResult, check_disjoint, new_forward_arcs
from rematch.metrics import MetricSpace, PointId


class FarthestServer(LineAlgorithm):
    ALGORITHM_ID = "farthest-server"

    def __init__(self, metric: MetricSpace, servers: Sequence[PointId]) -> None:
        super().__init__(metric, servers)
        self.last_sweep: SweepResult | None = None

    def _add_forward(self, client: PointId, server: PointId) -> None:
        self.last_sweep = None
        super()._add_forward(client, server)

    def _add_backward(self, client: PointId, server: PointId) -> None:
        self.last_sweep = farthest_server_cancel(self._matching, client, server)
        self.logger.debug(
            f"sweep over {len(self.last_sweep.replaced) + 1} pairs, "
            f"max orphaned {self.last_sweep.max_orphaned}"
        )

    def check_sweep(self) -> str | None:
        """New forward arcs of the last sweep are disjoint; at most one orphaned server."""
        if self.last_sweep is None:
            return None
        if self.last_sweep.max_orphaned > 1:
            return (
                f"{self.last_sweep.max_orphaned} unvisited servers had lost their client "
                f"at once during the sweep"
            )
        return check_disjoint(new_forward_arcs(self.last_sweep, self.line), self.line)

    def check_arc_motion(self) -> str | None:
        for client, old, new in self.last_changes.client_moves:
            if old is None:
                continue
            if self.line.coordinate(new) >= self.line.coordinate(old):
                return f"client {client} moved right from server {old} to {new}"
        return None
