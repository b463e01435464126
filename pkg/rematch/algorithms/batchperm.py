"""BatchPerm: re-batch the latest d^i(t) clients on every arrival."""

from collections import Counter
from collections.abc import Sequence

from rematch.algorithms.base import OnlineAlgorithm
from rematch.algorithms.dto import Checkpoint, StepResult
from rematch.errors import DomainError, InfeasibleError
from rematch.matching import AssignmentProblem, IncrementalSolver, Matching, min_cost_matching
from rematch.metrics import MetricSpace, PointId


def block_exponent(t: int, d: int) -> int:
    """Largest i with d^i dividing t."""
    if t < 1:
        raise DomainError(f"block exponent needs t ≥ 1, got {t}")
    if d < 2:
        raise DomainError(f"base must be at least 2, got {d}")
    i = 0
    while t % d == 0:
        t //= d
        i += 1
    return i


def block_decomposition(t: int, d: int) -> list[int]:
    """Block sizes of t's base-d digits, largest first (11, 2 -> [8, 2, 1])."""
    if d < 2:
        raise DomainError(f"base must be at least 2, got {d}")
    digits: list[int] = []
    while t:
        digits.append(t % d)
        t //= d
    blocks: list[int] = []
    for power in range(len(digits) - 1, -1, -1):
        blocks.extend([d**power] * digits[power])
    return blocks


def block_boundaries(t: int, d: int) -> list[int]:
    """Prefix sums of the decomposition, starting at 0 (11, 2 -> [0, 8, 10, 11])."""
    bounds = [0]
    for size in block_decomposition(t, d):
        bounds.append(bounds[-1] + size)
    return bounds


class BatchPerm(OnlineAlgorithm):
    """Permutation with base-d re-batching.

    At time t the block of the last d^i(t) clients is unmatched, the matching reverts to
    the checkpoint taken before that block, and the block is handed to Permutation as a
    single batch. Only checkpoints at the block boundaries of t are kept.
    """

    ALGORITHM_ID = "batchperm"

    def __init__(self, metric: MetricSpace, servers: Sequence[PointId], d: int = 2) -> None:
        if d < 2:
            raise DomainError(f"base must be at least 2, got {d}")
        super().__init__(metric, servers)
        self.d = d
        self._solver = IncrementalSolver(metric, self.servers)
        self._clients: list[PointId] = []
        self._matching = Matching(metric)
        self._checkpoints: dict[int, Checkpoint] = {0: Checkpoint(Matching(metric), frozenset())}
        self.rematch_counts: Counter[PointId] = Counter()

    @property
    def matching(self) -> Matching:
        return self._matching

    @property
    def t(self) -> int:
        return len(self._clients)

    @property
    def clients(self) -> tuple[PointId, ...]:
        return tuple(self._clients)

    @property
    def used_servers(self) -> frozenset[PointId]:
        return self._solver.used_servers

    @property
    def max_client_rematches(self) -> int:
        return max(self.rematch_counts.values(), default=0)

    def arrive(self, client: PointId) -> StepResult:
        if self._solver.free_count == 0:
            raise InfeasibleError(f"no free server left for client {client}")

        self._solver.add_client(client)
        self._clients.append(int(client))
        t = self.t
        i = block_exponent(t, self.d)
        base = t - self.d**i

        checkpoint = self._checkpoints[base]
        batch = self._clients[base:]
        used = self._solver.used_servers
        s_cur = tuple(sorted(used - checkpoint.used_servers))
        local = min_cost_matching(AssignmentProblem(tuple(batch), s_cur, self.metric)).matching

        updated = checkpoint.matching.copy()
        for c, s in local:
            updated.match(c, s)

        rematched = [c for c in batch[:-1] if self._matching.server_of(c) != updated.server_of(c)]
        self.rematch_counts.update(rematched)
        self._matching = updated

        self._checkpoints[t] = Checkpoint(updated.copy(), used)
        live = set(block_boundaries(t, self.d))
        for stale in [k for k in self._checkpoints if k not in live]:
            del self._checkpoints[stale]

        self.logger.debug(
            f"t={t}: re-batched {len(batch)} client(s) from checkpoint {base}, "
            f"{len(rematched)} rematched"
        )
        return StepResult(
            recourse=len(rematched) + 1, rematched=rematched, server=updated.server_of(client)
        )
