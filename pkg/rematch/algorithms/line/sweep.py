"""Left-to-right re-matching of an overlap region (the FarthestServer sweep)."""

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from enum import StrEnum

from rematch.algorithms.line.arcs import Direction, make_arc
from rematch.errors import ContractError
from rematch.metrics import LineMetric, PointId


class Role(StrEnum):
    CLIENT = "client"
    SERVER = "server"


@dataclass(frozen=True)
class SweepPoint:
    point: PointId
    role: Role


@dataclass
class SweepResult:
    pairs: list[tuple[PointId, PointId]]
    replaced: dict[PointId, PointId]  # old pairs of the region, client -> server
    max_orphaned: int  # most unvisited servers whose client had moved, at any moment


def sweep(
    points: Sequence[SweepPoint],
    old: Mapping[PointId, PointId],
    metric: LineMetric,
) -> SweepResult:
    """Re-match `points` (sorted left to right) while keeping old pairs where possible.

    `old` maps clients to their previous servers; the pending new client and its server
    have no entry. At a server, an old pair whose client waits in L is kept, otherwise
    the waiting client with the rightmost old server takes it (the pending client counts
    as rightmost). A client takes the waiting server if there is one.
    """
    coords = [metric.coordinate(p.point) for p in points]
    if any(a >= b for a, b in zip(coords, coords[1:], strict=False)):
        raise ContractError("sweep points must be sorted left to right")

    members = {p.point: p.role for p in points}
    for client, server in old.items():
        if members.get(client) != Role.CLIENT or members.get(server) != Role.SERVER:
            raise ContractError(f"old pair ({client}, {server}) is not inside the sweep region")
    old_client = {s: c for c, s in old.items()}

    def old_server_key(client: PointId) -> float:
        server = old.get(client)
        return math.inf if server is None else metric.coordinate(server)

    waiting: list[PointId] = []
    waiting_server: PointId | None = None
    orphaned: set[PointId] = set()
    max_orphaned = 0
    pairs: list[tuple[PointId, PointId]] = []

    for p, x in zip(points, coords, strict=True):
        if p.role == Role.SERVER:
            orphaned.discard(p.point)
            if waiting_server is not None:
                raise ContractError(f"server {p.point} met while server {waiting_server} waits")
            if not waiting:
                waiting_server = p.point
                continue
            previous = old_client.get(p.point)
            if previous is not None and previous in waiting:
                chosen = previous
            else:
                chosen = max(waiting, key=old_server_key)
                moved_from = old.get(chosen)
                if moved_from is not None and metric.coordinate(moved_from) > x:
                    orphaned.add(moved_from)
            waiting.remove(chosen)
            pairs.append((chosen, p.point))
        elif waiting_server is not None:
            pairs.append((p.point, waiting_server))
            waiting_server = None
            moved_from = old.get(p.point)
            if moved_from is not None and metric.coordinate(moved_from) > x:
                orphaned.add(moved_from)
        else:
            waiting.append(p.point)
        max_orphaned = max(max_orphaned, len(orphaned))

    if waiting or waiting_server is not None:
        raise ContractError("sweep region is unbalanced: points left unmatched")
    return SweepResult(pairs=sorted(pairs), replaced=dict(old), max_orphaned=max_orphaned)


def new_forward_arcs(result: SweepResult, metric: LineMetric) -> list[tuple[PointId, PointId]]:
    """Forward pairs the sweep created (pairs not present before)."""
    created = [(c, s) for c, s in result.pairs if result.replaced.get(c) != s]
    return [(c, s) for c, s in created if make_arc(metric, c, s).direction == Direction.FORWARD]


def check_disjoint(pairs: Sequence[tuple[PointId, PointId]], metric: LineMetric) -> str | None:
    """Report two overlapping arcs among `pairs`, or None."""
    arcs = sorted((make_arc(metric, c, s) for c, s in pairs), key=lambda a: a.lo)
    for left, right in zip(arcs, arcs[1:], strict=False):
        if left.overlaps(right):
            return (
                f"arcs ({left.client}, {left.server}) and ({right.client}, {right.server}) "
                f"overlap"
            )
    return None
