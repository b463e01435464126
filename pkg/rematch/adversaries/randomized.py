"""Seeded random instances: static line / plane instances and mixed dynamic streams."""

import logging
from typing import Literal

import numpy as np

from rematch.adversaries.dto import GeneratedInstance
from rematch.errors import DomainError
from rematch.events import Event, EventKind
from rematch.metrics import GeneralMetric, LineMetric, MetricSpace

logger = logging.getLogger(__name__)

LINE_SPAN = 10**6
PLANE_SIDE = 1000.0

DYNAMIC_WEIGHTS = {
    EventKind.CLIENT_ARRIVAL: 0.35,
    EventKind.SERVER_ARRIVAL: 0.30,
    EventKind.CLIENT_DEPARTURE: 0.20,
    EventKind.SERVER_DEPARTURE: 0.15,
}


def random_metric(kind: Literal["line", "general"], n_points: int,
                  rng: np.random.Generator) -> MetricSpace:
    if kind == "line":
        coords = rng.choice(LINE_SPAN + 1, size=n_points, replace=False)
        return LineMetric([int(x) for x in coords])
    if kind == "general":
        return GeneralMetric.from_points(rng.uniform(0.0, PLANE_SIDE, size=(n_points, 2)))
    raise DomainError(f"unknown random metric kind {kind!r}")


def gen_random(kind: Literal["line", "general"], n: int, k: int, seed: int) -> GeneratedInstance:
    """n servers and k clients on n + k distinct random points; clients in random order."""
    if not 0 <= k <= n:
        raise DomainError(f"need 0 ≤ k ≤ n, got n={n}, k={k}")
    if n < 1:
        raise DomainError(f"need at least one server, got n={n}")
    rng = np.random.default_rng(seed)
    metric = random_metric(kind, n + k, rng)
    clients = [int(c) for c in rng.permutation(np.arange(n, n + k))]
    return GeneratedInstance(
        metric=metric,
        servers=list(range(n)),
        clients=clients,
        name=f"random-{kind}-{n}-{k}-{seed}",
    )


def gen_dynamic(n_points: int, n_events: int, seed: int) -> GeneratedInstance:
    """Random plane metric and a feasible stream mixing all four event kinds.

    A quarter of the points start with a server; their arrivals take the first seq
    numbers, so the stream starts at seq len(servers). Each step draws a kind among those
    currently allowed, then a point uniformly among the eligible ones.
    """
    if n_points < 2:
        raise DomainError(f"need at least two points, got {n_points}")
    rng = np.random.default_rng(seed)
    metric = random_metric("general", n_points, rng)
    initial = sorted(int(p) for p in rng.choice(n_points, size=max(1, n_points // 4),
                                                 replace=False))

    servers: set[int] = set(initial)
    clients: set[int] = set()
    created: dict[tuple[EventKind, int], int] = {}
    events: list[Event] = []
    everything = set(range(n_points))
    for seq in range(len(initial), len(initial) + n_events):
        candidates = {
            EventKind.CLIENT_ARRIVAL: sorted(everything - clients)
            if len(servers) > len(clients) else [],
            EventKind.SERVER_ARRIVAL: sorted(everything - servers),
            EventKind.CLIENT_DEPARTURE: sorted(clients),
            EventKind.SERVER_DEPARTURE: sorted(servers) if len(servers) > len(clients) else [],
        }
        kinds = [kind for kind, points in candidates.items() if points]
        weights = np.array([DYNAMIC_WEIGHTS[kind] for kind in kinds])
        kind = kinds[int(rng.choice(len(kinds), p=weights / weights.sum()))]
        point = int(rng.choice(candidates[kind]))

        subject = None
        match kind:
            case EventKind.CLIENT_ARRIVAL:
                clients.add(point)
                created[(EventKind.CLIENT_ARRIVAL, point)] = seq
            case EventKind.SERVER_ARRIVAL:
                servers.add(point)
                created[(EventKind.SERVER_ARRIVAL, point)] = seq
            case EventKind.CLIENT_DEPARTURE:
                clients.remove(point)
                subject = created.pop((EventKind.CLIENT_ARRIVAL, point), None)
            case EventKind.SERVER_DEPARTURE:
                servers.remove(point)
                subject = created.pop((EventKind.SERVER_ARRIVAL, point), None)
        events.append(Event(seq=seq, kind=kind, point=point, subject=subject))

    logger.debug(f"Dynamic stream of {n_events} events over {n_points} points (seed {seed})")
    return GeneratedInstance(
        metric=metric,
        servers=initial,
        events=events,
        name=f"random-dynamic-{n_points}-{n_events}-{seed}",
    )
