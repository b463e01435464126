"""Shared fixtures: the hand-checked line states and a small tree."""

import pytest

from rematch.adversaries import GeneratedInstance
from rematch.hst import Hst, HstNode
from rematch.matching import Matching
from rematch.metrics import LineMetric

# Five clients left of four servers, a fifth client far right. Ids: c1..c5 = 0..4,
# s1..s5 = 5..9.
RIGHT_CLIENTS = [0, 1, 2, 3, 11]
RIGHT_SERVERS = [6, 7, 8, 9]


@pytest.fixture
def five_client_instance() -> GeneratedInstance:
    """End-to-end version: s5 at -10 keeps the four right servers optimal until c5."""
    metric = LineMetric(RIGHT_CLIENTS + RIGHT_SERVERS + [-10])
    return GeneratedInstance(
        metric=metric, servers=[5, 6, 7, 8, 9], clients=[0, 1, 2, 3, 4], name="five-client"
    )


@pytest.fixture
def five_client_state() -> tuple[Matching, int, int]:
    """Hand-built version with s5 at -2: parallel forward arcs (c_i, s_i), pending (c5, s5)."""
    metric = LineMetric(RIGHT_CLIENTS + RIGHT_SERVERS + [-2])
    matching = Matching(metric, [(0, 5), (1, 6), (2, 7), (3, 8)])
    return matching, 4, 9


@pytest.fixture
def six_arc_state() -> tuple[Matching, int, int]:
    """Five forward arcs and a pending backward arc (c6@12, s6@-3) covering all of them.

    Ids c1..c6 = 0..5 at (-1, 1, 2, 5, 6, 12); s1..s6 = 6..11 at (4, 3, 7, 8, 10, -3).
    """
    metric = LineMetric([-1, 1, 2, 5, 6, 12, 4, 3, 7, 8, 10, -3])
    matching = Matching(metric, [(0, 6), (1, 7), (2, 8), (3, 9), (4, 10)])
    return matching, 5, 11


@pytest.fixture
def four_leaf_hst() -> Hst:
    """Depth 3: leaves 0, 1 under node 1 and 2, 3 under node 2; leaf edges 1, middle 2.

    Sibling leaves are 2 apart, leaves in different halves 6 apart.
    """
    return Hst(
        [
            HstNode(0, None, 3, 0.0),
            HstNode(1, 0, 2, 2.0),
            HstNode(2, 0, 2, 2.0),
            HstNode(3, 1, 1, 1.0, point=0),
            HstNode(4, 1, 1, 1.0, point=1),
            HstNode(5, 2, 1, 1.0, point=2),
            HstNode(6, 2, 1, 1.0, point=3),
        ]
    )
