"""Line instance on which BatchPerm pays Ω(log_d k) ratio and Ω(k log_d k) recourse.

The core sequence ε, 1+ε, -1-ε, 2+ε, -2-ε, ... makes the optimum add servers
1, -1, 2, -2, ..., each on the far side of its client, so a batch with an odd number of
core clients must send one of them across the center. Auxiliary clients sit far to the
right next to their own servers. An arrival that completes a block of size d^i is
auxiliary iff the core arrivals already in that block's last sub-block are odd, so the
last sub-block of every completed block holds an odd number of core clients. For odd d
every block of size d^i is odd already and core arrivals alone satisfy the rule;
auxiliary arrivals only appear for d = 2.

Coordinates are scaled by 8 so ε = 1/8 stays integral.
"""

import logging
import math

from rematch.adversaries.dto import GeneratedInstance
from rematch.errors import DomainError
from rematch.metrics import LineMetric

logger = logging.getLogger(__name__)

SCALE = 8
EPSILON = 1


def _completed_block(t: int, d: int) -> int:
    """Largest i with d^i dividing t (0 when t completes no block)."""
    i = 0
    while t % d == 0:
        t //= d
        i += 1
    return i


def core_clients(k: int) -> list[int]:
    """Scaled core arrival coordinates: ε, then j+ε and -j-ε for j = 1, 2, ..."""
    coords = [EPSILON]
    j = 1
    while len(coords) < k:
        coords += [SCALE * j + EPSILON, -(SCALE * j + EPSILON)]
        j += 1
    return coords[:k]


def gen_batchperm_tight(k: int, d: int) -> GeneratedInstance:
    if d != 2 and (d < 3 or d % 2 == 0):
        raise DomainError(f"tight instance needs d = 2 or an odd base d ≥ 3, got {d}")
    if k < d or d ** round(math.log(k, d)) != k:
        raise DomainError(f"k must be a power of d={d}, got {k}")

    half = (k + 1) // 2
    core_servers = [sign * SCALE * j for j in range(1, half + 1) for sign in (1, -1)]
    core = core_clients(k)

    aux_base = 10 * k * SCALE
    aux_servers = [aux_base + 3 * j for j in range(k)]
    aux_clients = [aux_base + 3 * j + 1 for j in range(k)]

    coords = core_servers + aux_servers + core + aux_clients
    n_servers = len(core_servers) + len(aux_servers)
    core_ids = iter(range(n_servers, n_servers + len(core)))
    aux_ids = iter(range(n_servers + len(core), len(coords)))

    is_core: list[bool] = []
    clients: list[int] = []
    n_core = n_aux = 0
    while n_core < len(core):
        t = len(is_core) + 1
        i = _completed_block(t, d)
        take_core = True
        if i >= 1:
            sub_block = d ** (i - 1)
            take_core = sum(is_core[t - sub_block : t - 1]) % 2 == 0
        if not take_core and n_aux == len(aux_clients):
            take_core = True
        if take_core:
            clients.append(next(core_ids))
            n_core += 1
        else:
            clients.append(next(aux_ids))
            n_aux += 1
        is_core.append(take_core)

    logger.debug(f"batchperm-tight k={k} d={d}: {n_core} core, {n_aux} auxiliary arrivals")
    return GeneratedInstance(
        metric=LineMetric(coords),
        servers=list(range(n_servers)),
        clients=clients,
        name=f"batchperm-tight-{k}-{d}",
    )
