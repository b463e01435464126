"""Hand-built line instances."""

from rematch.adversaries.dto import GeneratedInstance
from rematch.errors import DomainError
from rematch.metrics import LineMetric


def gen_line_alternating(n: int) -> GeneratedInstance:
    """Clients and servers on alternating sides of the origin, n/2 of each.

    Client t and server t sit at 1 + (t-1)t and -(t-1)t, on opposite sides each step, so
    the optimum after t clients is the nested chain (c_t, s_{t-1}, ..., s_1, ..., s_t)
    and changes every client at every step. OPT after t clients is t².
    """
    if n < 2 or n % 2:
        raise DomainError(f"alternating instance needs an even n ≥ 2, got {n}")
    pairs = n // 2
    coords = [0, 1]  # c_1, s_1
    for t in range(2, pairs + 1):
        right, left = 1 + (t - 1) * t, -(t - 1) * t
        client, server = (right, left) if t % 2 == 0 else (left, right)
        coords += [client, server]
    metric = LineMetric(coords)
    return GeneratedInstance(
        metric=metric,
        servers=list(range(1, n, 2)),
        clients=list(range(0, n, 2)),
        name=f"line-alternating-{n}",
    )


def gen_recursive_cancel_bad(k: int) -> GeneratedInstance:
    """k forward arcs in parallel, then k backward arcs that each cancel all of them.

    Clients c_i at i-1 take servers s_i at k+1+i; clients x_j far right then pull in
    servers y_j far left. RecursiveCancel walks through every remaining forward arc on
    each backward arrival while FarthestServer re-matches a constant number per arrival.
    """
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")
    c = [i - 1 for i in range(1, k + 1)]
    s = [k + 1 + i for i in range(1, k + 1)]
    y = [-(2 * k + 1) - j for j in range(1, k + 1)]
    x = [2 * k + 2 + j for j in range(1, k + 1)]
    metric = LineMetric(c + s + y + x)
    return GeneratedInstance(
        metric=metric,
        servers=list(range(k, 3 * k)),
        clients=list(range(k)) + list(range(3 * k, 4 * k)),
        name=f"recursive-cancel-bad-{k}",
    )
