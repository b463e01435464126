"""Exact min-cost matching by successive shortest augmenting paths.

Clients are inserted one at a time. Each insertion runs Dijkstra on reduced costs
from the new client and flips the cheapest alternating path to a free server, so the
used-server sets of consecutive optima are nested and the terminal of each path is the
server Permutation hands to the new client.

Dual feasibility is kept as u[r] + v[j] ≤ cost[r][j] with equality on matched pairs
and v[j] = 0 on free servers, which makes every intermediate matching optimal.
"""

import logging
import math
from collections.abc import Sequence

import numpy as np

from rematch.errors import ContractError, InfeasibleError
from rematch.matching.dto import AssignmentProblem, Augmentation, Matching, OptResult
from rematch.metrics import Distance, MetricSpace, PointId

logger = logging.getLogger(__name__)

# Sentinel larger than any reachable path length on integer metrics
_INT_INF = np.iinfo(np.int64).max // 4


class IncrementalSolver:
    """Optimal matching of a growing client list to a fixed server pool.

    Ties between equally cheap augmenting paths go to the smallest terminal server id.
    """

    def __init__(self, metric: MetricSpace, servers: Sequence[PointId]) -> None:
        for s in servers:
            metric.check_point(s)
        ordered = sorted(int(s) for s in servers)
        if len(set(ordered)) != len(ordered):
            raise ContractError("duplicate server ids")

        self.metric = metric
        self._servers = np.asarray(ordered, dtype=np.int64)
        self._dtype = np.int64 if metric.is_exact else np.float64
        self._inf = _INT_INF if metric.is_exact else np.inf

        m = len(ordered)
        self._v = np.zeros(m, dtype=self._dtype)
        self._row_of_col = np.full(m, -1, dtype=np.int64)
        self._clients: list[PointId] = []
        self._row_index: dict[PointId, int] = {}
        self._u: list[Distance] = []
        self._col_of_row: list[int] = []
        self._cost_rows: list[np.ndarray] = []

    @property
    def servers(self) -> tuple[PointId, ...]:
        return tuple(int(s) for s in self._servers)

    @property
    def clients(self) -> tuple[PointId, ...]:
        return tuple(self._clients)

    @property
    def free_count(self) -> int:
        return len(self._servers) - len(self._clients)

    def add_client(self, client: PointId) -> Augmentation:
        """Insert `client` and re-optimize; returns the augmenting path summary."""
        self.metric.check_point(client)
        client = int(client)
        if client in self._row_index:
            raise ContractError(f"client {client} already inserted")
        if self.free_count == 0:
            raise InfeasibleError(f"no free server left for client {client}")

        cost_row = self.metric.distances_from(client, self._servers).astype(self._dtype)
        r0 = len(self._clients)
        self._clients.append(client)
        self._row_index[client] = r0
        self._cost_rows.append(cost_row)
        self._col_of_row.append(-1)

        start = cost_row - self._v
        u0 = start.min()
        self._u.append(u0)

        dist = start - u0
        prev_row = np.full(len(self._servers), r0, dtype=np.int64)
        settled = np.zeros(len(self._servers), dtype=bool)
        best: Distance | None = None
        candidates: list[int] = []

        while True:
            masked = np.where(settled, self._inf, dist)
            j = int(np.argmin(masked))
            dj = masked[j]
            if dj >= self._inf or (best is not None and dj > best):
                break
            settled[j] = True

            r2 = int(self._row_of_col[j])
            if r2 < 0:
                if best is None:
                    best = dj
                candidates.append(j)
                continue

            relaxed = dj + self._cost_rows[r2] - self._u[r2] - self._v
            improve = ~settled & (relaxed < dist)
            dist[improve] = relaxed[improve]
            prev_row[improve] = r2

        if best is None:
            raise InfeasibleError(f"no augmenting path for client {client}")
        terminal = min(candidates)

        # Potentials: rows entered the tree at the distance of the column they hang from
        delta = np.where(settled, best - dist, 0).astype(self._dtype)
        self._v -= delta
        self._u[r0] += best
        for j in np.flatnonzero(settled):
            r2 = int(self._row_of_col[j])
            if r2 >= 0:
                self._u[r2] += delta[j]

        moved: list[tuple[PointId, PointId, PointId]] = []
        j = terminal
        while True:
            r = int(prev_row[j])
            old = self._col_of_row[r]
            self._row_of_col[j] = r
            self._col_of_row[r] = j
            if r == r0:
                break
            moved.append((self._clients[r], int(self._servers[old]), int(self._servers[j])))
            j = old

        server = int(self._servers[terminal])
        logger.debug(
            f"client {client}: new server {server}, path length {best}, "
            f"{len(moved)} client(s) shifted"
        )
        return Augmentation(client=client, server=server, moved=moved)

    def pairs(self) -> list[tuple[PointId, PointId]]:
        return sorted(
            (c, int(self._servers[self._col_of_row[r]])) for r, c in enumerate(self._clients)
        )

    @property
    def used_servers(self) -> frozenset[PointId]:
        return frozenset(int(self._servers[j]) for j in self._col_of_row)

    @property
    def cost(self) -> Distance:
        parts = (self._cost_rows[r][j] for r, j in enumerate(self._col_of_row))
        if self.metric.is_exact:
            return int(sum(int(x) for x in parts))
        return math.fsum(float(x) for x in parts)

    def matching(self) -> Matching:
        return Matching(self.metric, self.pairs())

    def result(self) -> OptResult:
        return OptResult(matching=self.matching(), cost=self.cost, used_servers=self.used_servers)


def min_cost_matching(problem: AssignmentProblem) -> OptResult:
    """Minimum-cost matching saturating every client of `problem`."""
    solver = IncrementalSolver(problem.metric, problem.servers)
    for client in problem.clients:
        solver.add_client(client)
    return solver.result()
