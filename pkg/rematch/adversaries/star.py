"""Adaptive adversary on the star: every client lands where the chain from the center
client ends, so a low-recourse algorithm keeps paying along one long path."""

import logging
from collections.abc import Sequence

from rematch.adversaries.dto import GeneratedInstance
from rematch.errors import ContractError, MetricError
from rematch.matching import Matching
from rematch.metrics import PointId, StarMetric

logger = logging.getLogger(__name__)


def gen_star(n: int) -> GeneratedInstance:
    metric = StarMetric(n)
    return GeneratedInstance(
        metric=metric, servers=list(metric.leaves()), adversary="star", name=f"star-{n}"
    )


class StarAdversary:
    """Emits up to n clients on a StarMetric with one server per leaf."""

    def __init__(self, metric: StarMetric) -> None:
        if not isinstance(metric, StarMetric):
            raise MetricError(f"star adversary needs a star metric, got {metric.METRIC_KIND}")
        self.metric = metric
        self.emitted: list[PointId] = []

    @property
    def exhausted(self) -> bool:
        return len(self.emitted) >= self.metric.n_leaves

    def next_client(self, matching: Matching) -> PointId:
        """Next location: the center first, then the end of the chain through `matching`."""
        if self.exhausted:
            raise ContractError(f"all {self.metric.n_leaves} clients already emitted")
        if not self.emitted:
            point = StarMetric.CENTER
        else:
            point = self._chain_end(matching)
        self.emitted.append(point)
        return point

    def _chain_end(self, matching: Matching) -> PointId:
        present = set(self.emitted)
        client = StarMetric.CENTER
        for _ in range(len(present) + 1):
            server = matching.server_of(client)
            if server is None:
                raise ContractError(f"client at {client} is unmatched")
            if server not in present:
                return server
            client = server
        raise ContractError("matching chain from the center does not terminate")


def normalize_star_matching(matching: Matching) -> Matching:
    """Move clients onto their own leaf's server while that server is unused."""
    normalized = matching.copy()
    changed = True
    while changed:
        changed = False
        for client, server in normalized.pairs():
            if client == StarMetric.CENTER or server == client:
                continue
            if normalized.client_of(client) is None:
                normalized.unmatch(client)
                normalized.match(client, client)
                changed = True
    return normalized


def path_diagnostic(history: Sequence[Matching]) -> list[int]:
    """Chain length of each normalized matching of a star-adversary run.

    Pairs off the chain from the center must sit on their own leaf, where they cost 0.
    """
    lengths: list[int] = []
    for t, matching in enumerate(history):
        if not isinstance(matching.metric, StarMetric):
            raise MetricError(f"matching {t} is not over a star metric")
        normalized = normalize_star_matching(matching)
        if normalized.cost > matching.cost:
            raise ContractError(f"normalizing matching {t} increased its cost")

        chain: set[PointId] = set()
        client = StarMetric.CENTER
        while client in normalized and client not in chain:
            chain.add(client)
            client = normalized.server_of(client)
        for client, server in normalized.pairs():
            if client not in chain and client != server:
                raise ContractError(
                    f"normalized matching {t} has pair ({client}, {server}) "
                    f"neither on the chain from the center nor on its own leaf"
                )
        lengths.append(len(chain))
    logger.debug(f"Star chain lengths: {lengths}")
    return lengths
