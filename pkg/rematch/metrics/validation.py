"""Metric validation and aspect ratio."""

import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np

from rematch.errors import DomainError
from rematch.metrics.base import MetricSpace

logger = logging.getLogger(__name__)

# Relative tolerance for float comparisons on general metrics
REL_TOL = 1e-9


@dataclass(frozen=True)
class MetricViolation:
    kind: Literal["diagonal", "symmetry", "triangle"]
    points: tuple[int, ...]  # (i,) / (i, j) / (i, j, k) with d[i][k] > d[i][j] + d[j][k]
    detail: str


def tolerance(matrix: np.ndarray) -> float:
    if matrix.size == 0:
        return 0.0
    return REL_TOL * float(np.max(matrix))


def validate_metric(m: MetricSpace) -> MetricViolation | None:
    """Return the first violated metric axiom, or None when the table is a metric.

    Checks run in order diagonal, symmetry, triangle; within a check the first offending
    tuple in lexicographic order is reported.
    """
    d = m.distance_matrix().astype(np.float64)
    tol = tolerance(d) if not m.is_exact else 0.0

    diag = np.flatnonzero(np.abs(np.diagonal(d)) > tol)
    if diag.size:
        i = int(diag[0])
        return MetricViolation("diagonal", (i,), f"d[{i}][{i}] = {d[i, i]} ≠ 0")

    asym = np.argwhere(np.abs(d - d.T) > tol)
    if asym.size:
        i, j = (int(x) for x in asym[0])
        return MetricViolation(
            "symmetry", (i, j), f"d[{i}][{j}] = {d[i, j]} ≠ d[{j}][{i}] = {d[j, i]}"
        )

    # bad[j, k] <=> d[i][k] > d[i][j] + d[j][k] + tol
    for i in range(d.shape[0]):
        bad = d[i, None, :] > d[i, :, None] + d + tol
        hits = np.argwhere(bad)
        if hits.size:
            j, k = (int(x) for x in hits[0])
            return MetricViolation(
                "triangle",
                (i, j, k),
                f"d[{i}][{k}] = {d[i, k]} > d[{i}][{j}] + d[{j}][{k}] = {d[i, j] + d[j, k]}",
            )

    return None


def aspect_ratio(m: MetricSpace) -> float:
    """Max pairwise distance divided by min nonzero pairwise distance.

    A metric whose points all coincide has aspect ratio 1.
    """
    if m.n_points < 2:
        raise DomainError(f"aspect ratio needs at least 2 points, got {m.n_points}")

    d = m.distance_matrix()
    nonzero = d[d > 0]
    if nonzero.size == 0:
        return 1.0
    return float(np.max(nonzero)) / float(np.min(nonzero))
