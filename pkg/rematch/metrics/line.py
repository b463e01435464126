"""Line metric with integer coordinates."""

from collections.abc import Sequence

import numpy as np

from rematch.errors import MetricError
from rematch.metrics.base import Distance, MetricSpace, PointId

# |x| ≤ 2^40 keeps every pairwise distance below 2^41 and sums of up to 2^21 of them
# inside int64, which the solver's integer vectors rely on.
COORD_BOUND = 2**40


class LineMetric(MetricSpace):
    """Points on the integer line; distance(x, y) = |loc(x) - loc(y)|.

    Point ids are positions in the coordinate list. Coordinates must be distinct.
    """

    METRIC_KIND = "line"

    def __init__(self, coordinates: Sequence[int]) -> None:
        coords: list[int] = []
        for i, x in enumerate(coordinates):
            if isinstance(x, bool) or not isinstance(x, (int, np.integer)):
                raise MetricError(f"point {i}: coordinate {x!r} is not an integer")
            if abs(int(x)) > COORD_BOUND:
                raise MetricError(f"point {i}: coordinate {x} exceeds ±2^40")
            coords.append(int(x))

        seen: dict[int, int] = {}
        for i, x in enumerate(coords):
            if x in seen:
                raise MetricError(f"points {seen[x]} and {i} share coordinate {x}")
            seen[x] = i

        self._coords = tuple(coords)
        self._array = np.asarray(coords, dtype=np.int64)
        self._order = tuple(sorted(range(len(coords)), key=coords.__getitem__))
        self._matrix: np.ndarray | None = None

    @classmethod
    def from_coordinates(cls, coordinates: Sequence[int]) -> "LineMetric":
        return cls(coordinates)

    @property
    def n_points(self) -> int:
        return len(self._coords)

    @property
    def is_exact(self) -> bool:
        return True

    @property
    def coordinates(self) -> tuple[int, ...]:
        return self._coords

    def coordinate(self, p: PointId) -> int:
        self.check_point(p)
        return self._coords[p]

    def order(self) -> tuple[PointId, ...]:
        """Point ids sorted left to right."""
        return self._order

    def _distance(self, a: PointId, b: PointId) -> Distance:
        return abs(self._coords[a] - self._coords[b])

    def distances_from(self, a: PointId, targets: np.ndarray) -> np.ndarray:
        self.check_point(a)
        return np.abs(self._array[targets] - self._array[a])

    def distance_matrix(self) -> np.ndarray:
        if self._matrix is None:
            matrix = np.abs(np.subtract.outer(self._array, self._array))
            matrix.setflags(write=False)
            self._matrix = matrix
        return self._matrix
