"""Fully dynamic matching on a general metric through one sampled HST."""

from collections.abc import Sequence

from rematch.adversaries import GeneratedInstance
from rematch.algorithms.nearest_match import NearestMatch
from rematch.events import Event
from rematch.harness.dto import RunTrace
from rematch.harness.runner import replay
from rematch.metrics import MetricSpace, PointId


def dynamic_general(
    metric: MetricSpace,
    events: Sequence[Event],
    seed: int,
    servers: Sequence[PointId] = (),
) -> RunTrace:
    """Sample a tree with `seed`, run NearestMatch on it and report costs in `metric`.

    Rows carry the cost of the matching in the original metric next to its cost in the
    tree, so one run shows both the tree-competitive guarantee and the embedding loss.
    """
    algorithm = NearestMatch(metric, servers, hst_seed=seed)
    instance = GeneratedInstance(
        metric=metric, servers=list(servers), events=list(events), name="dynamic"
    )
    return replay(algorithm, instance)
