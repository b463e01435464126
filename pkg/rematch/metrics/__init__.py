"""Finite metric spaces: line, general table, star."""

from rematch.metrics.base import Distance, MetricSpace, PointId
from rematch.metrics.general import GeneralMetric, StarMetric
from rematch.metrics.line import COORD_BOUND, LineMetric
from rematch.metrics.serialization import (
    format_metric,
    meaningful_lines,
    parse_metric,
    read_metric,
    write_metric,
)
from rematch.metrics.validation import REL_TOL, MetricViolation, aspect_ratio, validate_metric

__all__ = [
    "COORD_BOUND",
    "REL_TOL",
    "Distance",
    "GeneralMetric",
    "LineMetric",
    "MetricSpace",
    "MetricViolation",
    "PointId",
    "StarMetric",
    "aspect_ratio",
    "format_metric",
    "meaningful_lines",
    "parse_metric",
    "read_metric",
    "validate_metric",
    "write_metric",
]
