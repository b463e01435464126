"""Cancellation of overlapping forward arcs when a backward arc arrives.

Both routines mutate a Matching on a line metric and leave it maximally canceled: every
interval under the new backward arc that had a forward crossing loses exactly one.
"""

from collections.abc import Callable

from rematch.algorithms.line.arcs import Direction, line_metric_of, make_arc, matching_arcs
from rematch.algorithms.line.sweep import Role, SweepPoint, SweepResult, sweep
from rematch.errors import ContractError
from rematch.matching import Matching
from rematch.metrics import PointId

# (new client, server, previous client of that server)
TransferHook = Callable[[PointId, PointId, PointId], None]


def _require_backward(matching: Matching, client: PointId, server: PointId) -> None:
    metric = line_metric_of(matching)
    if make_arc(metric, client, server).direction != Direction.BACKWARD:
        raise ContractError(f"({client}, {server}) is not a backward arc")
    if client in matching or matching.client_of(server) is not None:
        raise ContractError(f"({client}, {server}) must be a pending, unmatched pair")


def recursive_cancel(
    matching: Matching,
    client: PointId,
    server: PointId,
    on_transfer: TransferHook | None = None,
) -> list[tuple[PointId, PointId]]:
    """Add backward arc (client, server) by repeatedly stealing the overlapping
    forward arc with the rightmost server.

    Returns the pairs written, in order; the last one is the remaining backward arc.
    """
    _require_backward(matching, client, server)
    metric = line_metric_of(matching)

    written: list[tuple[PointId, PointId]] = []
    c, s = client, server
    while True:
        pending = make_arc(metric, c, s)
        if pending.direction != Direction.BACKWARD:
            raise ContractError(f"remaining arc ({c}, {s}) turned forward")

        overlapping = [
            arc
            for arc in matching_arcs(matching)
            if arc.direction == Direction.FORWARD and arc.overlaps(pending)
        ]
        if not overlapping:
            matching.match(c, s)
            written.append((c, s))
            return written

        victim = max(overlapping, key=lambda arc: arc.hi)
        matching.unmatch(victim.client)
        matching.match(c, victim.server)
        written.append((c, victim.server))
        if on_transfer is not None:
            on_transfer(c, victim.server, victim.client)
        c = victim.client


def overlap_region(
    matching: Matching, client: PointId, server: PointId
) -> dict[PointId, PointId]:
    """Forward pairs whose client lies in [loc(server), loc(client)]."""
    metric = line_metric_of(matching)
    lo, hi = metric.coordinate(server), metric.coordinate(client)
    region: dict[PointId, PointId] = {}
    for arc in matching_arcs(matching):
        if arc.direction == Direction.FORWARD and lo <= metric.coordinate(arc.client) <= hi:
            region[arc.client] = arc.server
    return region


def farthest_server_cancel(matching: Matching, client: PointId, server: PointId) -> SweepResult:
    """Add backward arc (client, server) by sweeping its overlap region once."""
    _require_backward(matching, client, server)
    metric = line_metric_of(matching)

    old = overlap_region(matching, client, server)
    points = [SweepPoint(c, Role.CLIENT) for c in old]
    points += [SweepPoint(s, Role.SERVER) for s in old.values()]
    points += [SweepPoint(client, Role.CLIENT), SweepPoint(server, Role.SERVER)]
    points.sort(key=lambda p: metric.coordinate(p.point))

    result = sweep(points, old, metric)
    for c in old:
        matching.unmatch(c)
    for c, s in result.pairs:
        matching.match(c, s)
    return result
