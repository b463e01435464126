"""Online algorithm registry.

Each algorithm is a class implementing the OnlineAlgorithm ABC; the registry stores
classes because every run builds a fresh instance over its own metric and servers.
"""

import logging

from rematch.algorithms import batchperm, nearest_match, permutation
from rematch.algorithms.base import OnlineAlgorithm
from rematch.algorithms.dto import BatchOutcome, Checkpoint, StepChanges, StepResult
from rematch.algorithms.line import farthest_server, recursive

logger = logging.getLogger(__name__)


def _validate_algorithm(algorithm_class: type[OnlineAlgorithm], name: str) -> None:
    """Validate algorithm class has a matching ALGORITHM_ID and required methods."""
    if not isinstance(algorithm_class.ALGORITHM_ID, str):
        raise TypeError(
            f"{name}: ALGORITHM_ID must be str, got {type(algorithm_class.ALGORITHM_ID)}"
        )
    if algorithm_class.ALGORITHM_ID != name:
        raise TypeError(f"{name}: registered under a different ALGORITHM_ID "
                        f"({algorithm_class.ALGORITHM_ID})")

    required_methods = ["arrive", "handle"]
    for method_name in required_methods:
        if not hasattr(algorithm_class, method_name):
            raise TypeError(f"{name}: missing required method {method_name}()")

    logger.debug(f"✓ {name}: implements arrive()")


def _build_registry() -> dict[str, type[OnlineAlgorithm]]:
    """Build ALGORITHMS registry with validation."""
    algorithm_classes: dict[str, type[OnlineAlgorithm]] = {
        "permutation": permutation.Permutation,
        "batchperm": batchperm.BatchPerm,
        "farthest-server": farthest_server.FarthestServer,
        "recursive-cancel": recursive.RecursiveCancel,
        "nearest-match": nearest_match.NearestMatch,
    }

    registry = {}
    for name, cls in algorithm_classes.items():
        _validate_algorithm(cls, name)
        registry[name] = cls

    logger.info(f"Algorithm registry initialized with {len(registry)} algorithms")
    return registry


ALGORITHMS: dict[str, type[OnlineAlgorithm]] = _build_registry()

__all__ = [
    "ALGORITHMS",
    "BatchOutcome",
    "Checkpoint",
    "OnlineAlgorithm",
    "StepChanges",
    "StepResult",
]
