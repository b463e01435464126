"""Table-backed general metrics and the star metric."""

import numpy as np
from scipy.spatial import distance as sp_distance

from rematch.errors import MetricError
from rematch.metrics.base import Distance, MetricSpace, PointId


class GeneralMetric(MetricSpace):
    """Metric given by an explicit n×n float64 distance table.

    Construction only checks shape and sign; symmetry and the triangle inequality are
    reported by validate_metric so a bad table can still be inspected.
    """

    METRIC_KIND = "general"

    def __init__(self, table: np.ndarray | list[list[float]]) -> None:
        try:
            matrix = np.array(table, dtype=np.float64)
        except (TypeError, ValueError) as e:
            raise MetricError(f"distance table is not numeric: {e}") from e

        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise MetricError(f"distance table must be square, got shape {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise MetricError("distance table contains non-finite entries")
        if np.any(matrix < 0):
            raise MetricError("distance table contains negative entries")

        matrix.setflags(write=False)
        self._table = matrix

    @classmethod
    def from_points(cls, points: np.ndarray) -> "GeneralMetric":
        """Euclidean metric over the rows of a coordinate array."""
        coords = np.asarray(points, dtype=np.float64)
        if coords.ndim != 2:
            raise MetricError(f"expected an (n, dim) coordinate array, got {coords.shape}")
        return cls(sp_distance.cdist(coords, coords))

    @property
    def n_points(self) -> int:
        return int(self._table.shape[0])

    def _distance(self, a: PointId, b: PointId) -> Distance:
        return float(self._table[a, b])

    def distance_matrix(self) -> np.ndarray:
        return self._table


class StarMetric(GeneralMetric):
    """Star with center 0 and leaves 1..n_leaves.

    Center-to-leaf distance is 1, leaf-to-leaf distance is 2.
    """

    METRIC_KIND = "star"
    CENTER: PointId = 0

    def __init__(self, n_leaves: int) -> None:
        if n_leaves < 1:
            raise MetricError(f"star needs at least one leaf, got {n_leaves}")
        n = n_leaves + 1
        table = np.full((n, n), 2.0)
        table[0, :] = 1.0
        table[:, 0] = 1.0
        np.fill_diagonal(table, 0.0)
        super().__init__(table)
        self._n_leaves = n_leaves

    @property
    def n_leaves(self) -> int:
        return self._n_leaves

    def leaves(self) -> range:
        return range(1, self._n_leaves + 1)
