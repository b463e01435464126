"""Permutation: match each batch to the servers the offline optimum just started using."""

from collections.abc import Sequence

from rematch.algorithms.base import OnlineAlgorithm
from rematch.algorithms.dto import BatchOutcome, StepResult
from rematch.errors import ContractError, InfeasibleError
from rematch.matching import AssignmentProblem, IncrementalSolver, Matching, min_cost_matching
from rematch.metrics import Distance, MetricSpace, PointId


class Permutation(OnlineAlgorithm):
    """Online matching without re-matching.

    The incremental solver tracks the nested optimal server sets S*_t; a batch is matched
    optimally to S_cur = S*_{t+ℓ} minus S*_{t-1} and never touched again.
    """

    ALGORITHM_ID = "permutation"

    def __init__(self, metric: MetricSpace, servers: Sequence[PointId]) -> None:
        super().__init__(metric, servers)
        self._solver = IncrementalSolver(metric, self.servers)
        self._matching = Matching(metric)
        self.last_batch_cost: Distance = 0
        self.batches: list[list[PointId]] = []

    @property
    def matching(self) -> Matching:
        return self._matching

    @property
    def used_servers(self) -> frozenset[PointId]:
        """S*_t: servers of the offline optimum on the clients seen so far."""
        return self._solver.used_servers

    @property
    def optimal_cost(self) -> Distance:
        return self._solver.cost

    def arrive_batch(self, batch: Sequence[PointId]) -> BatchOutcome:
        if not batch:
            raise ContractError("batch must not be empty")
        if len(batch) > self._solver.free_count:
            raise InfeasibleError(
                f"batch of {len(batch)} clients but {self._solver.free_count} free server(s)"
            )

        new_servers = [self._solver.add_client(c).server for c in batch]
        problem = AssignmentProblem(tuple(batch), tuple(sorted(new_servers)), self.metric)
        local = min_cost_matching(problem).matching
        for client, server in local:
            self._matching.match(client, server)

        self.last_batch_cost = local.cost
        self.batches.append(list(batch))
        self.logger.debug(
            f"batch of {len(batch)}: new servers {new_servers}, local cost {local.cost}"
        )
        return BatchOutcome(new_servers=new_servers, local_matching=local, recourse=len(batch))

    def arrive_one(self, client: PointId) -> tuple[PointId, int]:
        outcome = self.arrive_batch([client])
        return outcome.new_servers[0], outcome.recourse

    def arrive(self, client: PointId) -> StepResult:
        server, recourse = self.arrive_one(client)
        return StepResult(recourse=recourse, server=server)
