"""Arcs, consecutive-point intervals and discrepancy on the line."""

import bisect
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import StrEnum

from rematch.errors import MetricError
from rematch.matching import Matching
from rematch.metrics import LineMetric, PointId


class Direction(StrEnum):
    FORWARD = "forward"  # server at or right of its client
    BACKWARD = "backward"


@dataclass(frozen=True)
class Arc:
    client: PointId
    server: PointId
    direction: Direction
    lo: int  # leftmost endpoint coordinate
    hi: int

    @property
    def length(self) -> int:
        return self.hi - self.lo

    def overlaps(self, other: "Arc") -> bool:
        """Open intervals intersect (coordinates are distinct, so touching never happens)."""
        return self.lo < other.hi and other.lo < self.hi


@dataclass(frozen=True)
class IntervalStats:
    left: int
    right: int
    disc: int  # servers minus clients at or left of `left`
    nf: int  # forward arcs crossing
    nb: int  # backward arcs crossing

    @property
    def length(self) -> int:
        return self.right - self.left


def line_metric_of(matching: Matching) -> LineMetric:
    metric = matching.metric
    if not isinstance(metric, LineMetric):
        raise MetricError(f"line accounting needs a line metric, got {metric.METRIC_KIND}")
    return metric


def make_arc(metric: LineMetric, client: PointId, server: PointId) -> Arc:
    x, y = metric.coordinate(client), metric.coordinate(server)
    if x <= y:
        return Arc(client, server, Direction.FORWARD, x, y)
    return Arc(client, server, Direction.BACKWARD, y, x)


def matching_arcs(matching: Matching) -> list[Arc]:
    metric = line_metric_of(matching)
    return [make_arc(metric, c, s) for c, s in matching.pairs()]


def crossing_counts(arcs: Iterable[Arc], coords: Sequence[int]) -> tuple[list[int], list[int]]:
    """Forward and backward arcs covering each gap (coords[i], coords[i+1]).

    `coords` must be sorted and contain every arc endpoint that falls in its range.
    """
    gaps = max(len(coords) - 1, 0)
    diff_f = [0] * (gaps + 1)
    diff_b = [0] * (gaps + 1)
    for arc in arcs:
        first = bisect.bisect_left(coords, arc.lo)
        # gaps first..last-1 lie inside the arc
        last = min(bisect.bisect_left(coords, arc.hi), gaps)
        if first >= last:
            continue
        diff = diff_f if arc.direction == Direction.FORWARD else diff_b
        diff[first] += 1
        diff[last] -= 1

    nf: list[int] = []
    nb: list[int] = []
    running_f = running_b = 0
    for i in range(gaps):
        running_f += diff_f[i]
        running_b += diff_b[i]
        nf.append(running_f)
        nb.append(running_b)
    return nf, nb


def interval_decomposition(matching: Matching) -> list[IntervalStats]:
    """Intervals between consecutive matched points with discrepancy and crossing counts."""
    metric = line_metric_of(matching)
    marks = sorted(
        [(metric.coordinate(c), -1) for c in matching.clients()]
        + [(metric.coordinate(s), +1) for s in matching.servers()]
    )
    coords = [x for x, _ in marks]
    nf, nb = crossing_counts(matching_arcs(matching), coords)

    stats: list[IntervalStats] = []
    disc = 0
    for i in range(len(coords) - 1):
        disc += marks[i][1]
        stats.append(IntervalStats(coords[i], coords[i + 1], disc, nf[i], nb[i]))
    return stats


def check_no_free_server_inside_arcs(
    matching: Matching, free_servers: Iterable[PointId]
) -> str | None:
    """Report an unused server strictly inside some arc, or None."""
    metric = line_metric_of(matching)
    free = sorted((metric.coordinate(s), s) for s in free_servers)
    xs = [x for x, _ in free]
    for arc in matching_arcs(matching):
        i = bisect.bisect_right(xs, arc.lo)
        if i < len(xs) and xs[i] < arc.hi:
            return (
                f"free server {free[i][1]} at {xs[i]} lies inside {arc.direction} arc "
                f"({arc.client}, {arc.server}) spanning [{arc.lo}, {arc.hi}]"
            )
    return None


def check_no_opposite_overlap(matching: Matching) -> str | None:
    """Report a forward arc overlapping a backward arc, or None.

    With a server-optimal server set this is the optimality test on the line.
    """
    arcs = matching_arcs(matching)
    forward = [a for a in arcs if a.direction == Direction.FORWARD]
    backward = [a for a in arcs if a.direction == Direction.BACKWARD]
    for f in forward:
        for b in backward:
            if f.overlaps(b):
                return (
                    f"forward arc ({f.client}, {f.server}) overlaps "
                    f"backward arc ({b.client}, {b.server})"
                )
    return None
