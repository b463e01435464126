"""Resolve algorithm and checker names against their registries."""

import logging
from collections.abc import Sequence
from typing import Literal

from rematch.algorithms import ALGORITHMS, OnlineAlgorithm
from rematch.errors import ContractError
from rematch.harness.checks import CHECKS, BaseCheck
from rematch.metrics import MetricSpace, PointId

logger = logging.getLogger(__name__)


def create_algorithm(
    name: str,
    metric: MetricSpace,
    servers: Sequence[PointId],
    d: int = 2,
    hst_seed: int = 0,
) -> OnlineAlgorithm:
    """Instantiate a registered algorithm for one run.

    Args:
        name: registry id, e.g. "farthest-server"
        metric: metric of the instance
        servers: initial server pool
        d: base for batchperm (ignored elsewhere)
        hst_seed: seed of the sampled tree for nearest-match (ignored elsewhere)

    Raises:
        ContractError: if the name is not registered
        MetricError: if the algorithm cannot run on this metric
    """
    if name not in ALGORITHMS:
        logger.error(f"Unknown algorithm {name!r}")
        raise ContractError(f"unknown algorithm {name!r}; available: {sorted(ALGORITHMS)}")

    cls = ALGORITHMS[name]
    match name:
        case "batchperm":
            algorithm = cls(metric, servers, d=d)  # type: ignore[call-arg]
        case "nearest-match":
            algorithm = cls(metric, servers, hst_seed=hst_seed)  # type: ignore[call-arg]
        case _:
            algorithm = cls(metric, servers)
    logger.debug(f"Created {name} over {metric!r} with {len(servers)} server(s)")
    return algorithm


def resolve_checks(spec: Sequence[str] | Literal["all"]) -> list[BaseCheck]:
    """Checkers named in `spec`; "all" enables every one, unknown names are skipped."""
    if spec == "all":
        return list(CHECKS.values())

    requested = [name.strip() for name in spec if name.strip() and name.strip() != "none"]
    unknown = sorted(set(requested) - set(CHECKS))
    if unknown:
        logger.warning(
            f"Unknown check IDs will be ignored: {unknown}. Available: {sorted(CHECKS)}"
        )
    return [CHECKS[name] for name in CHECKS if name in requested]
