"""Base online matching algorithm using ABC."""

import logging
from abc import ABC, abstractmethod
from collections.abc import Sequence

from rematch.algorithms.dto import StepResult
from rematch.errors import UnsupportedEventError
from rematch.events import Event, EventKind
from rematch.matching import Matching
from rematch.metrics import MetricSpace, PointId


class OnlineAlgorithm(ABC):
    """Base class for online matching algorithms.

    One instance serves one run. The server pool is fixed at construction unless the
    subclass supports server events.
    """

    ALGORITHM_ID: str
    SUPPORTS_DEPARTURES: bool = False

    def __init__(self, metric: MetricSpace, servers: Sequence[PointId]) -> None:
        self.metric = metric
        self._servers = tuple(sorted(int(s) for s in servers))

    @property
    def logger(self) -> logging.Logger:
        """Per-algorithm logger, switched to DEBUG by --debug-algorithms."""
        return logging.getLogger(f"rematch.algorithms.{self.ALGORITHM_ID}")

    def __init_subclass__(cls) -> None:
        """Validate subclass declares its id."""
        super().__init_subclass__()

        if not hasattr(cls, "ALGORITHM_ID"):
            raise NotImplementedError(f"{cls.__name__}: missing ALGORITHM_ID class attribute")

    @property
    def servers(self) -> tuple[PointId, ...]:
        return self._servers

    @property
    @abstractmethod
    def matching(self) -> Matching:
        """Current online matching M_t."""
        ...

    @abstractmethod
    def arrive(self, client: PointId) -> StepResult:
        """Serve one client arrival."""
        ...

    def handle(self, event: Event) -> StepResult:
        """Dispatch a stream event. Static algorithms only take client arrivals."""
        if event.kind == EventKind.CLIENT_ARRIVAL:
            return self.arrive(event.point)
        raise UnsupportedEventError(
            f"{self.ALGORITHM_ID} handles client arrivals only, got {event.kind} "
            f"at event {event.seq}"
        )
