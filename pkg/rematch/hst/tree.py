"""Hierarchically well-separated trees as a metric over their leaves.

Levels count up from the leaves: every leaf sits at level 1 and the root at level D.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from rematch.errors import InstanceFormatError, MetricError
from rematch.metrics import Distance, MetricSpace, PointId, meaningful_lines

NodeId = int


@dataclass
class HstNode:
    node_id: NodeId
    parent: NodeId | None
    level: int
    edge_length: float  # length of the edge to the parent, 0 for the root
    point: PointId | None = None  # set on leaves only
    children: list[NodeId] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children


class Hst(MetricSpace):
    """2-HST: children of a node are equidistant from it and edge lengths at least
    double on the way up. Distances are path-length sums between leaves."""

    METRIC_KIND = "hst"

    def __init__(self, nodes: Iterable[HstNode]) -> None:
        self._nodes: dict[NodeId, HstNode] = {}
        for node in nodes:
            if node.node_id in self._nodes:
                raise MetricError(f"node {node.node_id} defined twice")
            self._nodes[node.node_id] = HstNode(
                node.node_id, node.parent, node.level, float(node.edge_length), node.point
            )
        self._link()
        self._validate()
        self._index()

    def _link(self) -> None:
        roots = [n for n in self._nodes.values() if n.parent is None]
        if len(roots) != 1:
            raise MetricError(f"tree needs exactly one root, found {len(roots)}")
        self.root = roots[0].node_id
        for node in self._nodes.values():
            if node.parent is None:
                continue
            parent = self._nodes.get(node.parent)
            if parent is None:
                raise MetricError(f"node {node.node_id}: unknown parent {node.parent}")
            parent.children.append(node.node_id)
        for node in self._nodes.values():
            node.children.sort()

    def _validate(self) -> None:
        reached = 0
        stack = [self.root]
        while stack:
            node = self._nodes[stack.pop()]
            reached += 1
            stack.extend(node.children)
        if reached != len(self._nodes):
            raise MetricError("tree has a cycle or nodes detached from the root")

        for node in self._nodes.values():
            if node.edge_length < 0:
                raise MetricError(f"node {node.node_id}: negative edge length")
            if node.is_leaf:
                if node.level != 1:
                    raise MetricError(f"leaf {node.node_id} at level {node.level}, expected 1")
                if node.point is None:
                    raise MetricError(f"leaf {node.node_id} carries no point")
            elif node.point is not None:
                raise MetricError(f"internal node {node.node_id} carries point {node.point}")

            children = [self._nodes[c] for c in node.children]
            if any(child.level != node.level - 1 for child in children):
                raise MetricError(f"children of node {node.node_id} must sit at level "
                                  f"{node.level - 1}")
            lengths = {child.edge_length for child in children}
            if len(lengths) > 1:
                raise MetricError(f"children of node {node.node_id} are not equidistant")
            if lengths and node.parent is not None and node.edge_length < 2 * lengths.pop():
                raise MetricError(f"node {node.node_id}: parent edge shorter than twice the "
                                  f"child edge")

        points = sorted(n.point for n in self._nodes.values() if n.point is not None)
        if points != list(range(len(points))):
            raise MetricError("leaf points must be exactly 0..n-1")

    def _index(self) -> None:
        self.depth = self._nodes[self.root].level
        self._leaf_of: dict[PointId, NodeId] = {
            n.point: n.node_id for n in self._nodes.values() if n.point is not None
        }
        n, depth = len(self._leaf_of), self.depth
        # ancestors[p, l - 1]: node at level l above point p; climb[p, l - 1]: path length
        # from p up to that node
        self._ancestors = np.zeros((n, depth), dtype=np.int64)
        self._climb = np.zeros((n, depth), dtype=np.float64)
        for p, leaf in self._leaf_of.items():
            node, total = self._nodes[leaf], 0.0
            for level in range(1, depth + 1):
                self._ancestors[p, level - 1] = node.node_id
                self._climb[p, level - 1] = total
                total += node.edge_length
                if node.parent is not None:
                    node = self._nodes[node.parent]
        self._matrix: np.ndarray | None = None

    @property
    def n_points(self) -> int:
        return len(self._leaf_of)

    @property
    def nodes(self) -> list[HstNode]:
        return [self._nodes[k] for k in sorted(self._nodes)]

    def node(self, node_id: NodeId) -> HstNode:
        return self._nodes[node_id]

    def leaf(self, p: PointId) -> NodeId:
        self.check_point(p)
        return self._leaf_of[p]

    def ancestor(self, p: PointId, level: int) -> NodeId:
        self.check_point(p)
        return int(self._ancestors[p, level - 1])

    def ancestors(self, p: PointId) -> list[NodeId]:
        """Nodes above `p`, leaf first, root last."""
        self.check_point(p)
        return [int(x) for x in self._ancestors[p]]

    def lca_level(self, a: PointId, b: PointId) -> int:
        self.check_point(a)
        self.check_point(b)
        shared = self._ancestors[a] == self._ancestors[b]
        return int(np.argmax(shared)) + 1

    def _distance(self, a: PointId, b: PointId) -> Distance:
        level = self.lca_level(a, b)
        return float(self._climb[a, level - 1] + self._climb[b, level - 1])

    def distance_matrix(self) -> np.ndarray:
        if self._matrix is None:
            n = self.n_points
            shared = self._ancestors[:, None, :] == self._ancestors[None, :, :]
            lca = np.argmax(shared, axis=2)
            rows = np.arange(n)
            matrix = self._climb[rows[:, None], lca] + self._climb[rows[None, :], lca]
            matrix.setflags(write=False)
            self._matrix = matrix
        return self._matrix


def format_hst(tree: Hst) -> list[str]:
    lines = []
    for node in tree.nodes:
        parent = "-" if node.parent is None else str(node.parent)
        line = f"node {node.node_id} {parent} {node.level} {node.edge_length!r}"
        if node.point is not None:
            line += f" {node.point}"
        lines.append(line)
    return lines


def parse_hst(lines: Sequence[tuple[int, str]], source: str = "<input>") -> Hst:
    nodes: list[HstNode] = []
    for number, content in lines:
        tokens = content.split()
        if tokens[0] != "node" or len(tokens) not in (5, 6):
            raise InstanceFormatError(
                f"expected `node <id> <parent|-> <level> <edge> [point]`, got {content!r}",
                source,
                number,
            )
        try:
            nodes.append(
                HstNode(
                    node_id=int(tokens[1]),
                    parent=None if tokens[2] == "-" else int(tokens[2]),
                    level=int(tokens[3]),
                    edge_length=float(tokens[4]),
                    point=int(tokens[5]) if len(tokens) == 6 else None,
                )
            )
        except ValueError:
            raise InstanceFormatError(f"bad number in {content!r}", source, number) from None
    return Hst(nodes)


def read_hst(path: str | Path) -> Hst:
    return parse_hst(meaningful_lines(Path(path).read_text(encoding="utf-8")), str(path))


def write_hst(tree: Hst, path: str | Path) -> None:
    Path(path).write_text("\n".join(format_hst(tree)) + "\n", encoding="utf-8")
