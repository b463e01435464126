"""Random 2-HST embedding of a finite metric by ball carving."""

import logging

import numpy as np

from rematch.hst.tree import Hst, HstNode
from rematch.metrics import MetricSpace

logger = logging.getLogger(__name__)

# Keeps tree distances strictly above metric distances after float rounding.
SLACK = 1.0 + 2.0**-20


def tree_depth(ratio: float) -> int:
    """Smallest D ≥ 2 with 2^D ≥ ratio + 2."""
    depth = 2
    while 2.0**depth < ratio + 2:
        depth += 1
    return depth


def frt_sample(metric: MetricSpace, seed: int) -> Hst:
    """Sample a 2-HST over the points of `metric`.

    One random order of centers and one scale β = 2^U, U uniform in [0, 1), are shared by
    all levels. A cluster at level l is split by balls of radius β·2^(l-3)·δ around the
    centers in order, δ being the smallest positive distance. Edges above level-l nodes
    have length 2^l·δ/2 (times SLACK), which makes the tree distance dominate the metric.
    """
    n = metric.n_points
    if n == 1:
        return Hst([HstNode(node_id=0, parent=None, level=1, edge_length=0.0, point=0)])

    table = metric.distance_matrix().astype(np.float64)
    positive = table[table > 0]
    delta = float(positive.min()) if positive.size else 1.0
    ratio = float(table.max()) / delta
    depth = tree_depth(ratio)

    rng = np.random.default_rng(seed)
    beta = 2.0 ** rng.uniform(0.0, 1.0)
    centers = rng.permutation(n)

    def edge(level: int) -> float:
        return 2.0**level * (delta / 2) * SLACK

    nodes = [HstNode(node_id=0, parent=None, level=depth, edge_length=0.0)]
    clusters: list[tuple[int, np.ndarray]] = [(0, np.arange(n))]
    for level in range(depth - 1, 1, -1):
        radius = beta * 2.0 ** (level - 3) * delta
        carved: list[tuple[int, np.ndarray]] = []
        for parent_id, members in clusters:
            remaining = members
            for center in centers:
                if remaining.size == 0:
                    break
                inside = table[center, remaining] <= radius
                if not inside.any():
                    continue
                node_id = len(nodes)
                nodes.append(HstNode(node_id, parent_id, level, edge(level)))
                carved.append((node_id, remaining[inside]))
                remaining = remaining[~inside]
        clusters = carved

    for parent_id, members in clusters:
        for p in members:
            nodes.append(HstNode(len(nodes), parent_id, 1, edge(1), point=int(p)))

    logger.debug(f"Sampled HST over {n} points: depth {depth}, β={beta:.4f}, {len(nodes)} nodes")
    return Hst(nodes)
