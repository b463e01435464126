"""Data Transfer Objects for generated instances."""

from dataclasses import dataclass, field

from rematch.events import Event
from rematch.metrics import MetricSpace, PointId


@dataclass
class GeneratedInstance:
    metric: MetricSpace
    servers: list[PointId]  # present before the first client
    clients: list[PointId] = field(default_factory=list)  # arrival order
    events: list[Event] | None = None  # mixed stream after `servers`, replaces `clients`
    adversary: str | None = None  # adaptive client source, e.g. "star"
    name: str = ""

    @property
    def n_clients(self) -> int:
        return len(self.clients)
