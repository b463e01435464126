"""NearestMatch: fully dynamic matching on a 2-HST.

A client is matched inside the smallest subtree around it that holds a free server or a
server whose client lives outside that subtree; the displaced client is reinserted the
same way. Server arrivals pull back one client matched from outside. Every change raises
the level under consideration, so an event changes at most D matches.
"""

from collections.abc import Callable, Sequence

from rematch.algorithms.base import OnlineAlgorithm
from rematch.algorithms.dto import StepResult
from rematch.errors import ContractError, InfeasibleError
from rematch.events import Event, EventKind
from rematch.hst import Hst, NodeId, frt_sample
from rematch.matching import Matching
from rematch.metrics import MetricSpace, PointId


class NearestMatch(OnlineAlgorithm):
    """Clients and servers are identified by the point they sit on; a point holds at most
    one live client and one live server."""

    ALGORITHM_ID = "nearest-match"
    SUPPORTS_DEPARTURES = True

    def __init__(
        self,
        metric: MetricSpace,
        servers: Sequence[PointId],
        tree: Hst | None = None,
        hst_seed: int = 0,
    ) -> None:
        super().__init__(metric, servers)
        if tree is None:
            tree = metric if isinstance(metric, Hst) else frt_sample(metric, hst_seed)
        if tree.n_points != metric.n_points:
            raise ContractError(
                f"tree has {tree.n_points} leaves but the metric has {metric.n_points} points"
            )
        self.tree = tree
        self.depth = tree.depth
        self._matching = Matching(metric)
        self._live_servers: set[PointId] = set()
        self._free_count: dict[NodeId, int] = {}
        # per node, indexed by match level: matched servers / clients in the subtree
        self._server_levels: dict[NodeId, list[int]] = {}
        self._client_levels: dict[NodeId, list[int]] = {}
        for node in tree.nodes:
            self._free_count[node.node_id] = 0
            self._server_levels[node.node_id] = [0] * (self.depth + 1)
            self._client_levels[node.node_id] = [0] * (self.depth + 1)
        for s in self.servers:
            self._add_server(s)
        self.logger.info(f"NearestMatch on an HST of depth {self.depth}")

    @property
    def matching(self) -> Matching:
        return self._matching

    @property
    def tree_matching(self) -> Matching:
        return Matching(self.tree, self._matching.pairs())

    @property
    def live_servers(self) -> frozenset[PointId]:
        return frozenset(self._live_servers)

    @property
    def free_servers(self) -> frozenset[PointId]:
        return frozenset(self._live_servers) - self._matching.servers()

    def pair_level(self, client: PointId) -> int:
        server = self._matching.server_of(client)
        if server is None:
            raise ContractError(f"client {client} is not matched")
        return self.tree.lca_level(client, server)

    # counters

    def _bump_free(self, server: PointId, delta: int) -> None:
        for node in self.tree.ancestors(server):
            self._free_count[node] += delta

    def _bump_level(self, client: PointId, server: PointId, delta: int) -> None:
        level = self.tree.lca_level(client, server)
        for node in self.tree.ancestors(server):
            self._server_levels[node][level] += delta
        for node in self.tree.ancestors(client):
            self._client_levels[node][level] += delta

    def _add_server(self, server: PointId) -> None:
        self.metric.check_point(server)
        if server in self._live_servers:
            raise ContractError(f"a server is already live at point {server}")
        self._live_servers.add(server)
        self._bump_free(server, +1)

    def _pair(self, client: PointId, server: PointId) -> None:
        self._matching.match(client, server)
        self._bump_free(server, -1)
        self._bump_level(client, server, +1)

    def _unpair(self, client: PointId) -> PointId:
        server = self._matching.server_of(client)
        if server is None:
            raise ContractError(f"client {client} is not matched")
        self._bump_level(client, server, -1)
        self._matching.unmatch(client)
        self._bump_free(server, +1)
        return server

    def _descend(self, node: NodeId, holds: Callable[[NodeId], bool]) -> PointId:
        """Walk down to the leftmost leaf below `node` through children that hold."""
        current = self.tree.node(node)
        while not current.is_leaf:
            child = next((c for c in current.children if holds(c)), None)
            if child is None:
                raise ContractError(f"counters of node {current.node_id} are inconsistent")
            current = self.tree.node(child)
        assert current.point is not None
        return current.point

    def _descend_level(
        self, table: dict[NodeId, list[int]], node: NodeId, level: int
    ) -> PointId:
        return self._descend(node, lambda v: table[v][level] > 0)

    def _higher_level(self, table: dict[NodeId, list[int]], node: NodeId, level: int) -> int:
        """Lowest match level above `level` present in the subtree, 0 if none."""
        counts = table[node]
        for candidate in range(level + 1, self.depth + 1):
            if counts[candidate] > 0:
                return candidate
        return 0

    # subroutines

    def _insert_client(self, client: PointId) -> list[PointId]:
        moved: list[PointId] = []
        level = 1
        while True:
            node = self.tree.ancestor(client, level)
            if self._free_count[node] > 0:
                server = self._descend(node, lambda v: self._free_count[v] > 0)
                self._pair(client, server)
                moved.append(client)
                return moved
            stolen_level = self._higher_level(self._server_levels, node, level)
            if stolen_level:
                server = self._descend_level(self._server_levels, node, stolen_level)
                displaced = self._matching.client_of(server)
                assert displaced is not None
                self._unpair(displaced)
                self._pair(client, server)
                moved.append(client)
                self.logger.debug(
                    f"client {client} takes server {server} from {displaced} at level {level}"
                )
                client, level = displaced, stolen_level
            elif level < self.depth:
                level += 1
            else:
                raise ContractError("no free server reachable from the root")

    def _insert_server(self, server: PointId) -> list[PointId]:
        moved: list[PointId] = []
        level = 1
        while level < self.depth:
            node = self.tree.ancestor(server, level)
            pulled_level = self._higher_level(self._client_levels, node, level)
            if not pulled_level:
                level += 1
                continue
            client = self._descend_level(self._client_levels, node, pulled_level)
            released = self._unpair(client)
            self._pair(client, server)
            moved.append(client)
            self.logger.debug(
                f"server {server} pulls client {client} back from {released} at level {level}"
            )
            server, level = released, pulled_level
        return moved

    # events

    def arrive(self, client: PointId) -> StepResult:
        self.metric.check_point(client)
        if client in self._matching:
            raise ContractError(f"a client is already live at point {client}")
        if not self._free_count[self.tree.root]:
            raise InfeasibleError(f"client {client} arrives with no free server")
        moved = self._insert_client(client)
        return StepResult(
            recourse=len(set(moved)),
            rematched=sorted(set(moved) - {client}),
            server=self._matching.server_of(client),
        )

    def arrive_server(self, server: PointId) -> StepResult:
        self._add_server(server)
        moved = sorted(set(self._insert_server(server)))
        return StepResult(recourse=len(moved), rematched=moved)

    def depart_client(self, client: PointId) -> StepResult:
        if client not in self._matching:
            raise ContractError(f"no live client at point {client}")
        server = self._unpair(client)
        moved = sorted(set(self._insert_server(server)))
        return StepResult(recourse=len(moved), rematched=moved)

    def depart_server(self, server: PointId) -> StepResult:
        if server not in self._live_servers:
            raise ContractError(f"no live server at point {server}")
        client = self._matching.client_of(server)
        if client is not None and self._free_count[self.tree.root] == 0:
            raise InfeasibleError(f"server {server} departs and leaves client {client} unserved")
        if client is not None:
            self._unpair(client)
        self._bump_free(server, -1)
        self._live_servers.remove(server)
        if client is None:
            return StepResult(recourse=0)
        moved = sorted(set(self._insert_client(client)))
        return StepResult(recourse=len(moved), rematched=moved, server=None)

    def handle(self, event: Event) -> StepResult:
        try:
            match event.kind:
                case EventKind.CLIENT_ARRIVAL:
                    return self.arrive(event.point)
                case EventKind.SERVER_ARRIVAL:
                    return self.arrive_server(event.point)
                case EventKind.CLIENT_DEPARTURE:
                    return self.depart_client(event.point)
                case EventKind.SERVER_DEPARTURE:
                    return self.depart_server(event.point)
        except InfeasibleError as e:
            raise InfeasibleError(str(e), event.seq) from e
        raise ContractError(f"unknown event kind {event.kind}")

    def check_subtree_discrepancy(self) -> str | None:
        """Recount, for every node, clients matched outside its subtree against
        max(0, clients - servers) inside it."""
        clients: dict[NodeId, int] = dict.fromkeys(self._free_count, 0)
        servers: dict[NodeId, int] = dict.fromkeys(self._free_count, 0)
        leaving: dict[NodeId, int] = dict.fromkeys(self._free_count, 0)
        for s in self._live_servers:
            for node in self.tree.ancestors(s):
                servers[node] += 1
        for c, s in self._matching.pairs():
            level = self.tree.lca_level(c, s)
            for depth_index, node in enumerate(self.tree.ancestors(c), start=1):
                clients[node] += 1
                if depth_index < level:
                    leaving[node] += 1
        for node in sorted(clients):
            expected = max(0, clients[node] - servers[node])
            if leaving[node] != expected:
                return (
                    f"node {node}: {leaving[node]} clients matched outside, expected "
                    f"{expected} ({clients[node]} clients, {servers[node]} servers)"
                )
        return None
