"""Redundant / non-redundant labels on arc intervals.

A forward arc added directly is labeled per elementary interval at creation: redundant
where backward crossings outnumbered forward crossings just before it arrived. A forward
arc created by stealing a server inherits the old arc's labels on its (shorter) span.
Backward arcs get labels per interval only for accounting, lowest server id first.
"""

from collections import defaultdict
from dataclasses import dataclass, field

from rematch.algorithms.line.arcs import (
    Direction,
    crossing_counts,
    interval_decomposition,
    make_arc,
    matching_arcs,
)
from rematch.matching import Matching
from rematch.metrics import LineMetric, PointId

ArcKey = tuple[PointId, PointId]  # (client, server)


@dataclass(frozen=True)
class LabelSegment:
    lo: int
    hi: int
    redundant: bool

    @property
    def length(self) -> int:
        return self.hi - self.lo


def _merge(segments: list[LabelSegment]) -> list[LabelSegment]:
    merged: list[LabelSegment] = []
    for seg in segments:
        if seg.length == 0:
            continue
        if merged and merged[-1].redundant == seg.redundant and merged[-1].hi == seg.lo:
            merged[-1] = LabelSegment(merged[-1].lo, seg.hi, seg.redundant)
        else:
            merged.append(seg)
    return merged


def segment_at(segments: list[LabelSegment], left: int, right: int) -> LabelSegment | None:
    for seg in segments:
        if seg.lo <= left and right <= seg.hi:
            return seg
    return None


@dataclass
class RedundancyLabeling:
    forward: dict[ArcKey, list[LabelSegment]] = field(default_factory=dict)
    backward: dict[ArcKey, list[LabelSegment]] = field(default_factory=dict)

    def redundant_length(self) -> int:
        return sum(s.length for segs in self.forward.values() for s in segs if s.redundant)

    def non_redundant_length(self) -> int:
        return sum(s.length for segs in self.forward.values() for s in segs if not s.redundant)


class RedundancyLedger:
    """Forward-arc labels keyed by client, maintained across RecursiveCancel steps."""

    def __init__(self, metric: LineMetric) -> None:
        self.metric = metric
        self._segments: dict[PointId, list[LabelSegment]] = {}

    def label_new_forward(self, before: Matching, client: PointId, server: PointId) -> None:
        """Label a forward arc added as-is, from crossing counts of the previous matching."""
        lo, hi = self.metric.coordinate(client), self.metric.coordinate(server)
        arcs = matching_arcs(before)
        inside = {x for a in arcs for x in (a.lo, a.hi) if lo < x < hi}
        coords = sorted(inside | {lo, hi})
        nf, nb = crossing_counts(arcs, coords)
        segments = [
            LabelSegment(coords[i], coords[i + 1], nb[i] > nf[i]) for i in range(len(coords) - 1)
        ]
        self._segments[client] = _merge(segments)

    def transfer(self, new_client: PointId, server: PointId, old_client: PointId) -> None:
        """`new_client` took `server` from `old_client`; inherit labels if forward."""
        inherited = self._segments.pop(old_client, [])
        arc = make_arc(self.metric, new_client, server)
        if arc.direction != Direction.FORWARD:
            return
        clipped = [
            LabelSegment(max(s.lo, arc.lo), min(s.hi, arc.hi), s.redundant)
            for s in inherited
            if s.hi > arc.lo and s.lo < arc.hi
        ]
        self._segments[new_client] = _merge(clipped)

    def segments(self, client: PointId) -> list[LabelSegment]:
        return list(self._segments.get(client, []))

    def labeling(self, matching: Matching) -> RedundancyLabeling:
        labeling = RedundancyLabeling()
        for arc in matching_arcs(matching):
            if arc.direction == Direction.FORWARD:
                labeling.forward[(arc.client, arc.server)] = self.segments(arc.client)

        backward = sorted(
            (a for a in matching_arcs(matching) if a.direction == Direction.BACKWARD),
            key=lambda a: a.server,
        )
        pieces: dict[ArcKey, list[LabelSegment]] = defaultdict(list)
        for stats in interval_decomposition(matching):
            crossing = [a for a in backward if a.lo <= stats.left and stats.right <= a.hi]
            quota = min(stats.nf, stats.nb)
            for rank, arc in enumerate(crossing):
                pieces[(arc.client, arc.server)].append(
                    LabelSegment(stats.left, stats.right, rank < quota)
                )
        labeling.backward = {key: _merge(segs) for key, segs in pieces.items()}
        return labeling


def check_redundant_counts(matching: Matching, labeling: RedundancyLabeling) -> str | None:
    """Per interval, redundant forward labels must number min(nf, nb)."""
    forward = [a for a in matching_arcs(matching) if a.direction == Direction.FORWARD]
    for arc in forward:
        segs = labeling.forward.get((arc.client, arc.server), [])
        covered = sum(s.length for s in segs)
        if covered != arc.length or (segs and (segs[0].lo, segs[-1].hi) != (arc.lo, arc.hi)):
            return f"labels of forward arc ({arc.client}, {arc.server}) do not cover it"

    for stats in interval_decomposition(matching):
        redundant = 0
        for arc in forward:
            if arc.lo <= stats.left and stats.right <= arc.hi:
                seg = segment_at(labeling.forward[(arc.client, arc.server)], stats.left,
                                 stats.right)
                if seg is None:
                    return f"interval [{stats.left}, {stats.right}] splits a label segment"
                redundant += seg.redundant
        if redundant != min(stats.nf, stats.nb):
            return (
                f"interval [{stats.left}, {stats.right}]: {redundant} redundant forward "
                f"labels, expected min(nf={stats.nf}, nb={stats.nb})"
            )
    return None


def check_suffix_domination(labeling: RedundancyLabeling) -> str | None:
    """Every suffix of every forward arc has non-redundant length ≥ redundant length."""
    for (client, server), segs in labeling.forward.items():
        balance = 0
        for seg in reversed(segs):
            balance += -seg.length if seg.redundant else seg.length
            if balance < 0:
                return (
                    f"forward arc ({client}, {server}): suffix from {seg.lo} is "
                    f"{-balance} more redundant than not"
                )
    return None


def check_redundant_cost(labeling: RedundancyLabeling) -> str | None:
    red, non_red = labeling.redundant_length(), labeling.non_redundant_length()
    if red > non_red:
        return f"redundant forward length {red} exceeds non-redundant length {non_red}"
    return None
