"""Data Transfer Objects for matchings and assignment problems."""

import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field

from rematch.errors import ContractError, InfeasibleError
from rematch.metrics import Distance, MetricSpace, PointId


def sum_distances(metric: MetricSpace, pairs: Iterable[tuple[PointId, PointId]]) -> Distance:
    """Exact total distance: integer sum on exact metrics, fsum otherwise."""
    if metric.is_exact:
        return sum((metric.distance(c, s) for c, s in pairs), 0)
    return math.fsum(metric.distance(c, s) for c, s in pairs)


class Matching:
    """Partial injective map clients → servers over one metric.

    The total cost is cached and recomputed lazily after a mutation, so repeated reads
    are free and floats never accumulate drift.
    """

    def __init__(
        self, metric: MetricSpace, pairs: Iterable[tuple[PointId, PointId]] = ()
    ) -> None:
        self.metric = metric
        self._server_of: dict[PointId, PointId] = {}
        self._client_of: dict[PointId, PointId] = {}
        self._cost: Distance | None = 0
        for client, server in pairs:
            self.match(client, server)

    def match(self, client: PointId, server: PointId) -> None:
        self.metric.check_point(client)
        self.metric.check_point(server)
        if client in self._server_of:
            raise ContractError(
                f"client {client} already matched to server {self._server_of[client]}"
            )
        if server in self._client_of:
            raise ContractError(
                f"server {server} already matched to client {self._client_of[server]}"
            )
        self._server_of[client] = server
        self._client_of[server] = client
        self._cost = None

    def unmatch(self, client: PointId) -> PointId:
        """Remove the pair of `client` and return its former server."""
        try:
            server = self._server_of.pop(client)
        except KeyError:
            raise ContractError(f"client {client} is not matched") from None
        del self._client_of[server]
        self._cost = None
        return server

    def rematch(self, client: PointId, server: PointId) -> PointId | None:
        """Point `client` at `server`; returns the previous server, if any."""
        old = self.unmatch(client) if client in self._server_of else None
        self.match(client, server)
        return old

    def server_of(self, client: PointId) -> PointId | None:
        return self._server_of.get(client)

    def client_of(self, server: PointId) -> PointId | None:
        return self._client_of.get(server)

    def clients(self) -> frozenset[PointId]:
        return frozenset(self._server_of)

    def servers(self) -> frozenset[PointId]:
        return frozenset(self._client_of)

    def pairs(self) -> list[tuple[PointId, PointId]]:
        """Pairs sorted by client id."""
        return sorted(self._server_of.items())

    @property
    def cost(self) -> Distance:
        if self._cost is None:
            self._cost = sum_distances(self.metric, self._server_of.items())
        return self._cost

    def copy(self) -> "Matching":
        clone = Matching(self.metric)
        clone._server_of = dict(self._server_of)
        clone._client_of = dict(self._client_of)
        clone._cost = self._cost
        return clone

    def __len__(self) -> int:
        return len(self._server_of)

    def __iter__(self) -> Iterator[tuple[PointId, PointId]]:
        return iter(self.pairs())

    def __contains__(self, client: object) -> bool:
        return client in self._server_of

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matching):
            return NotImplemented
        return self._server_of == other._server_of

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Matching({self.pairs()})"


@dataclass(frozen=True)
class AssignmentProblem:
    clients: tuple[PointId, ...]
    servers: tuple[PointId, ...]
    metric: MetricSpace = field(compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "clients", tuple(int(c) for c in self.clients))
        object.__setattr__(self, "servers", tuple(int(s) for s in self.servers))
        for p in (*self.clients, *self.servers):
            self.metric.check_point(p)
        if len(set(self.clients)) != len(self.clients):
            raise ContractError("duplicate client ids in assignment problem")
        if len(set(self.servers)) != len(self.servers):
            raise ContractError("duplicate server ids in assignment problem")
        if len(self.servers) < len(self.clients):
            raise InfeasibleError(
                f"{len(self.clients)} clients but only {len(self.servers)} servers"
            )


@dataclass
class OptResult:
    matching: Matching
    cost: Distance
    used_servers: frozenset[PointId]  # S*_t


@dataclass
class Augmentation:
    client: PointId  # the client just inserted
    server: PointId  # newly used server, terminal of the augmenting path
    moved: list[tuple[PointId, PointId, PointId]]  # (client, old server, new server)
