"""Base metric space using ABC."""

from abc import ABC, abstractmethod

import numpy as np

from rematch.errors import InvalidPointError

PointId = int
Distance = int | float


class MetricSpace(ABC):
    """Finite metric space over the points 0..n_points-1.

    Subclasses set METRIC_KIND and implement the raw distance lookup; id validation
    lives here so every kind reports bad ids the same way.
    """

    METRIC_KIND: str

    def __init_subclass__(cls) -> None:
        """Validate subclass declares its kind."""
        super().__init_subclass__()

        if not hasattr(cls, "METRIC_KIND"):
            raise NotImplementedError(f"{cls.__name__}: missing METRIC_KIND class attribute")

    @property
    @abstractmethod
    def n_points(self) -> int: ...

    @property
    def is_exact(self) -> bool:
        """True when distances are integers and comparisons need no tolerance."""
        return False

    @abstractmethod
    def _distance(self, a: PointId, b: PointId) -> Distance: ...

    @abstractmethod
    def distance_matrix(self) -> np.ndarray:
        """Full n×n distance table (read-only)."""
        ...

    def points(self) -> range:
        return range(self.n_points)

    def check_point(self, p: PointId) -> None:
        if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
            raise InvalidPointError(f"point id must be an integer, got {p!r}")
        if not 0 <= p < self.n_points:
            raise InvalidPointError(
                f"point {p} out of range for {self.METRIC_KIND} metric with "
                f"{self.n_points} points"
            )

    def distance(self, a: PointId, b: PointId) -> Distance:
        self.check_point(a)
        self.check_point(b)
        return self._distance(int(a), int(b))

    def distances_from(self, a: PointId, targets: np.ndarray) -> np.ndarray:
        """Distances from `a` to each id in `targets`, as a vector."""
        self.check_point(a)
        return self.distance_matrix()[int(a), targets]

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n_points={self.n_points})"
