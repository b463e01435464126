"""Event stream records, JSONL I/O and feasibility replay."""

import json
import logging
from collections.abc import Iterable, Sequence
from enum import StrEnum
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from rematch.errors import ContractError, InfeasibleError, InstanceFormatError
from rematch.metrics import PointId

logger = logging.getLogger(__name__)


class EventKind(StrEnum):
    CLIENT_ARRIVAL = "client_arrival"
    CLIENT_DEPARTURE = "client_departure"
    SERVER_ARRIVAL = "server_arrival"
    SERVER_DEPARTURE = "server_departure"


class Event(BaseModel):
    """One step of an event stream.

    `subject` optionally names the seq of the arrival that created the departing entity.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    seq: int = Field(ge=0)
    kind: EventKind
    point: PointId = Field(ge=0)
    subject: int | None = Field(default=None, ge=0)

    @property
    def is_arrival(self) -> bool:
        return self.kind in (EventKind.CLIENT_ARRIVAL, EventKind.SERVER_ARRIVAL)

    @property
    def is_client(self) -> bool:
        return self.kind in (EventKind.CLIENT_ARRIVAL, EventKind.CLIENT_DEPARTURE)


def arrival_events(
    servers: Iterable[PointId], clients: Iterable[PointId], start_seq: int = 0
) -> list[Event]:
    """Server arrivals followed by client arrivals, numbered consecutively."""
    events: list[Event] = []
    seq = start_seq
    for s in servers:
        events.append(Event(seq=seq, kind=EventKind.SERVER_ARRIVAL, point=s))
        seq += 1
    for c in clients:
        events.append(Event(seq=seq, kind=EventKind.CLIENT_ARRIVAL, point=c))
        seq += 1
    return events


class LivePopulation:
    """Clients and servers present after a prefix of a stream.

    `apply` enforces the stream rules: one live client and one live server per point,
    departures name live entities, and |servers| ≥ |clients| after every event.
    """

    def __init__(self, n_points: int, servers: Iterable[PointId] = ()) -> None:
        self.n_points = n_points
        self.clients: dict[PointId, int | None] = {}  # point -> seq of its arrival
        self.servers: dict[PointId, int | None] = {}
        self._last_seq: int | None = None
        for s in servers:
            self._add(self.servers, s, None, "server", None)

    def _add(
        self, live: dict[PointId, int | None], point: PointId, seq: int | None, what: str,
        event_seq: int | None,
    ) -> None:
        if not 0 <= point < self.n_points:
            raise ContractError(f"event {event_seq}: point {point} outside the metric")
        if point in live:
            raise ContractError(f"event {event_seq}: a {what} is already live at point {point}")
        live[point] = seq

    def _remove(self, live: dict[PointId, int | None], event: Event, what: str) -> None:
        if event.point not in live:
            raise ContractError(f"event {event.seq}: no live {what} at point {event.point}")
        created = live[event.point]
        if event.subject is not None and created is not None and event.subject != created:
            raise ContractError(
                f"event {event.seq}: subject {event.subject} does not match the {what} "
                f"created by event {created}"
            )
        del live[event.point]

    def apply(self, event: Event) -> None:
        if self._last_seq is not None and event.seq <= self._last_seq:
            raise ContractError(f"event {event.seq}: seq must increase (after {self._last_seq})")
        self._last_seq = event.seq

        match event.kind:
            case EventKind.CLIENT_ARRIVAL:
                if len(self.servers) <= len(self.clients):
                    raise InfeasibleError("client arrival with no free server", event.seq)
                self._add(self.clients, event.point, event.seq, "client", event.seq)
            case EventKind.SERVER_ARRIVAL:
                self._add(self.servers, event.point, event.seq, "server", event.seq)
            case EventKind.CLIENT_DEPARTURE:
                self._remove(self.clients, event, "client")
            case EventKind.SERVER_DEPARTURE:
                if len(self.servers) <= len(self.clients):
                    raise InfeasibleError("server departure would leave a client unserved",
                                          event.seq)
                self._remove(self.servers, event, "server")


def validate_stream(
    events: Sequence[Event], n_points: int, servers: Iterable[PointId] = ()
) -> LivePopulation:
    """Replay `events` and raise on the first rule violation."""
    population = LivePopulation(n_points, servers)
    for event in events:
        population.apply(event)
    return population


def read_events(path: str | Path) -> list[Event]:
    events: list[Event] = []
    with Path(path).open(encoding="utf-8") as fh:
        for number, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                events.append(Event.model_validate_json(raw))
            except ValidationError as e:
                raise InstanceFormatError(
                    f"invalid event: {e.errors()[0]['msg']}", str(path), number
                ) from None
    logger.info(f"Loaded {len(events)} events from {path}")
    return events


def write_events(events: Iterable[Event], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for event in events:
            record = event.model_dump(mode="json", exclude_none=True)
            fh.write(json.dumps(record, separators=(",", ":")) + "\n")
