import math

import numpy as np
import pytest

from rematch.adversaries import gen_line_alternating, gen_random, gen_recursive_cancel_bad
from rematch.algorithms import ALGORITHMS
from rematch.algorithms.line import (
    Direction,
    FarthestServer,
    RecursiveCancel,
    check_disjoint,
    check_no_free_server_inside_arcs,
    check_no_opposite_overlap,
    crossing_counts,
    farthest_server_cancel,
    interval_decomposition,
    make_arc,
    matching_arcs,
    new_forward_arcs,
    overlap_region,
    recursive_cancel,
)
from rematch.bootstrap import resolve_checks
from rematch.errors import ContractError, MetricError
from rematch.harness.runner import replay
from rematch.matching import Matching
from rematch.metrics import LineMetric, StarMetric


class TestArcs:
    def test_direction(self):
        metric = LineMetric([0, 5, -3])
        forward = make_arc(metric, 0, 1)
        backward = make_arc(metric, 0, 2)
        assert forward.direction == Direction.FORWARD
        assert (forward.lo, forward.hi, forward.length) == (0, 5, 5)
        assert backward.direction == Direction.BACKWARD
        assert (backward.lo, backward.hi) == (-3, 0)

    def test_crossing_counts(self):
        metric = LineMetric([0, 4, 6, 2])
        arcs = [make_arc(metric, 0, 1), make_arc(metric, 2, 3)]
        nf, nb = crossing_counts(arcs, [0, 2, 4, 6])
        assert nf == [1, 1, 0]
        assert nb == [0, 1, 1]

    def test_interval_decomposition(self, five_client_state):
        matching, _, _ = five_client_state
        stats = interval_decomposition(matching)
        assert [(s.left, s.right) for s in stats] == [
            (0, 1), (1, 2), (2, 3), (3, 6), (6, 7), (7, 8), (8, 9)
        ]
        assert [s.disc for s in stats] == [-1, -2, -3, -4, -3, -2, -1]
        assert [s.nf for s in stats] == [1, 2, 3, 4, 3, 2, 1]
        assert all(s.nb == 0 for s in stats)

    def test_free_server_inside_arc(self):
        metric = LineMetric([0, 5, 2])
        matching = Matching(metric, [(0, 1)])
        assert "free server 2" in check_no_free_server_inside_arcs(matching, [2])
        assert check_no_free_server_inside_arcs(Matching(metric, [(0, 2)]), [1]) is None

    def test_opposite_overlap(self):
        metric = LineMetric([0, 5, 4, 1])
        crossing = Matching(metric, [(0, 1), (2, 3)])
        assert check_no_opposite_overlap(crossing) is not None
        assert check_no_opposite_overlap(Matching(metric, [(0, 3), (2, 1)])) is None

    def test_needs_line_metric(self):
        with pytest.raises(MetricError):
            matching_arcs(Matching(StarMetric(2), [(0, 1)]))


class TestCancellation:
    def test_overlap_region(self, five_client_state):
        matching, client, server = five_client_state
        assert overlap_region(matching, client, server) == {0: 5, 1: 6, 2: 7, 3: 8}

    def test_farthest_server_sweep(self, five_client_state):
        matching, client, server = five_client_state
        result = farthest_server_cancel(matching, client, server)
        assert set(matching.pairs()) == {(0, 9), (1, 6), (2, 7), (3, 5), (4, 8)}
        assert result.max_orphaned <= 1
        assert matching.cost == 19
        assert check_disjoint(new_forward_arcs(result, matching.metric), matching.metric) is None
        assert check_no_opposite_overlap(matching) is None

    def test_recursive_cancel_cascade(self, five_client_state):
        matching, client, server = five_client_state
        transfers = []
        written = recursive_cancel(
            matching, client, server, lambda c, s, old: transfers.append((c, s, old))
        )
        assert written == [(4, 8), (3, 7), (2, 6), (1, 5), (0, 9)]
        assert transfers == [(4, 8, 3), (3, 7, 2), (2, 6, 1), (1, 5, 0)]
        assert matching.cost == 19

    def test_six_arc_sweep(self, six_arc_state):
        matching, client, server = six_arc_state
        result = farthest_server_cancel(matching, client, server)
        assert set(matching.pairs()) == {(0, 11), (1, 7), (2, 6), (3, 9), (4, 8), (5, 10)}
        assert result.max_orphaned == 1

    def test_rejects_forward_pair(self, five_client_state):
        matching, _, _ = five_client_state
        matching.unmatch(3)
        with pytest.raises(ContractError):
            recursive_cancel(matching, 3, 8)

    def test_rejects_matched_server(self, five_client_state):
        matching, client, _ = five_client_state
        with pytest.raises(ContractError):
            farthest_server_cancel(matching, client, 5)


class TestOnlineAlgorithms:
    def test_farthest_server_end_to_end(self, five_client_instance):
        algorithm = FarthestServer(five_client_instance.metric, five_client_instance.servers)
        trace = replay(algorithm, five_client_instance, resolve_checks("all"))
        assert set(algorithm.matching.pairs()) == {(0, 9), (1, 6), (2, 7), (3, 5), (4, 8)}
        assert [row.step_recourse for row in trace.rows] == [1, 1, 1, 1, 3]
        assert trace.rows[-1].alg_cost == trace.rows[-1].opt_cost == 27

    def test_recursive_cancel_end_to_end(self, five_client_instance):
        algorithm = RecursiveCancel(five_client_instance.metric, five_client_instance.servers)
        trace = replay(algorithm, five_client_instance, resolve_checks("all"))
        assert set(algorithm.matching.pairs()) == {(0, 9), (1, 5), (2, 6), (3, 7), (4, 8)}
        assert trace.rows[-1].step_recourse == 5
        assert algorithm.cascades == [4]
        assert trace.rows[-1].alg_cost == 27

    def test_last_step_rematched(self, five_client_instance):
        algorithm = FarthestServer(five_client_instance.metric, five_client_instance.servers)
        for client in five_client_instance.clients[:-1]:
            assert algorithm.arrive(client).rematched == []
        step = algorithm.arrive(4)
        assert step.rematched == [0, 3]
        assert step.server == 9

    def test_rejects_non_line_metric(self):
        with pytest.raises(MetricError):
            FarthestServer(StarMetric(3), [1, 2, 3])

    @pytest.mark.parametrize("algorithm", [FarthestServer, RecursiveCancel])
    def test_random_instances_pass_every_check(self, algorithm):
        for seed in range(5):
            instance = gen_random("line", 40, 30, seed=seed)
            trace = replay(algorithm(instance.metric, instance.servers), instance,
                           resolve_checks("all"))
            assert trace.max_ratio <= 3

    def test_recursive_cancel_bad_instance(self):
        k = 4
        instance = gen_recursive_cancel_bad(k)
        cancel = replay(RecursiveCancel(instance.metric, instance.servers), instance)
        sweep = replay(FarthestServer(instance.metric, instance.servers), instance)
        assert cancel.total_recourse == k + (k + 1) * (k + 2) // 2 - 1
        assert sweep.total_recourse == 14
        assert cancel.rows[-1].alg_cost == sweep.rows[-1].alg_cost


def _recourse_bound(k: int) -> float:
    return 2 * k * (1 + math.log2(2 * k)) + 2 * k


class TestAcceptanceScale:
    @staticmethod
    def _assert_bridge(instance, checks=()):
        sweep = replay(FarthestServer(instance.metric, instance.servers), instance, checks)
        cancel = replay(RecursiveCancel(instance.metric, instance.servers), instance, checks)
        assert [row.alg_cost for row in sweep.rows] == [row.alg_cost for row in cancel.rows]
        assert all(row.alg_cost <= 3 * row.opt_cost for row in sweep.rows)
        assert sweep.total_recourse <= _recourse_bound(len(instance.clients))
        return sweep, cancel

    def test_alternating_128(self):
        instance = gen_line_alternating(128)
        sweep, _ = self._assert_bridge(instance, resolve_checks("all"))
        assert len(sweep.rows) == 64
        assert sweep.rows[-1].opt_cost == 64 * 64

    def test_recursive_cancel_bad_64(self):
        k = 64
        instance = gen_recursive_cancel_bad(k)
        sweep, cancel = self._assert_bridge(instance, resolve_checks("all"))
        assert cancel.total_recourse == k + (k + 1) * (k + 2) // 2 - 1 == 2208
        assert sweep.total_recourse == 7 * k // 2
        assert cancel.total_recourse >= k * k // 4
        assert cancel.total_recourse >= 4 * sweep.total_recourse

    def test_random_instances_up_to_128_clients(self):
        for seed in range(500):
            rng = np.random.default_rng(seed)
            k = int(rng.integers(1, 129))
            n = k + int(rng.integers(0, k + 1))
            self._assert_bridge(gen_random("line", n, k, seed=seed))


class TestModuleLayout:
    def test_cancel_helpers_stay_callable(self):
        assert callable(recursive_cancel)
        assert callable(farthest_server_cancel)

    def test_registry_binds_line_algorithms(self):
        assert ALGORITHMS["recursive-cancel"] is RecursiveCancel
        assert ALGORITHMS["farthest-server"] is FarthestServer
