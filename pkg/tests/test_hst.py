import math

import numpy as np
import pytest

from rematch.adversaries import gen_dynamic
from rematch.adversaries.randomized import random_metric
from rematch.algorithms.nearest_match import NearestMatch
from rematch.algorithms.permutation import Permutation
from rematch.bootstrap import resolve_checks
from rematch.errors import ContractError, InfeasibleError, MetricError, UnsupportedEventError
from rematch.events import Event, EventKind
from rematch.harness.runner import replay
from rematch.hst import SLACK, Hst, HstNode, format_hst, frt_sample, parse_hst, tree_depth
from rematch.hst.dynamic import dynamic_general
from rematch.matching import AssignmentProblem, min_cost_matching
from rematch.metrics import GeneralMetric, LineMetric, aspect_ratio, meaningful_lines


class TestTree:
    def test_distances(self, four_leaf_hst):
        assert four_leaf_hst.depth == 3
        assert four_leaf_hst.n_points == 4
        assert four_leaf_hst.distance(0, 1) == 2.0
        assert four_leaf_hst.distance(0, 3) == 6.0
        assert four_leaf_hst.distance(2, 2) == 0.0

    def test_matrix_matches_pairwise(self, four_leaf_hst):
        matrix = four_leaf_hst.distance_matrix()
        for a in range(4):
            for b in range(4):
                assert matrix[a, b] == four_leaf_hst.distance(a, b)

    def test_ancestors_and_lca(self, four_leaf_hst):
        assert four_leaf_hst.ancestors(2) == [5, 2, 0]
        assert four_leaf_hst.ancestor(3, 2) == 2
        assert four_leaf_hst.leaf(1) == 4
        assert four_leaf_hst.lca_level(0, 1) == 2
        assert four_leaf_hst.lca_level(1, 2) == 3
        assert four_leaf_hst.lca_level(3, 3) == 1

    def test_text_round_trip(self, four_leaf_hst):
        lines = format_hst(four_leaf_hst)
        assert lines[0] == "node 0 - 3 0.0"
        parsed = parse_hst(meaningful_lines("\n".join(lines)))
        np.testing.assert_array_equal(parsed.distance_matrix(), four_leaf_hst.distance_matrix())

    @pytest.mark.parametrize(
        "nodes",
        [
            [HstNode(0, None, 2, 0.0), HstNode(1, None, 1, 1.0, point=0)],
            [HstNode(0, None, 2, 0.0), HstNode(1, 0, 2, 1.0, point=0)],
            [HstNode(0, None, 2, 0.0), HstNode(1, 0, 1, 1.0, point=0),
             HstNode(2, 0, 1, 2.0, point=1)],
            [HstNode(0, None, 3, 0.0), HstNode(1, 0, 2, 1.0), HstNode(2, 1, 1, 1.0, point=0)],
            [HstNode(0, None, 2, 0.0), HstNode(1, 0, 1, 1.0, point=1)],
        ],
        ids=["two-roots", "leaf-level", "unequal-children", "short-parent-edge", "point-ids"],
    )
    def test_rejects_malformed_trees(self, nodes):
        with pytest.raises(MetricError):
            Hst(nodes)


class TestSampling:
    @pytest.mark.parametrize(("ratio", "depth"), [(1, 2), (2, 2), (3, 3), (6, 3), (7, 4)])
    def test_tree_depth(self, ratio, depth):
        assert tree_depth(ratio) == depth

    def test_dominates_metric(self):
        metric = random_metric("general", 24, np.random.default_rng(0))
        base = metric.distance_matrix()
        for seed in range(20):
            tree = frt_sample(metric, seed)
            assert tree.n_points == 24
            assert (tree.distance_matrix() >= base).all()
            assert tree.depth <= math.ceil(math.log2(aspect_ratio(metric))) + 2

    def test_line_metric(self):
        metric = LineMetric([0, 1, 3, 7, 15])
        tree = frt_sample(metric, 5)
        assert (tree.distance_matrix() >= metric.distance_matrix()).all()

    def test_deterministic_per_seed(self):
        metric = random_metric("general", 16, np.random.default_rng(1))
        first, second = frt_sample(metric, 42), frt_sample(metric, 42)
        np.testing.assert_array_equal(first.distance_matrix(), second.distance_matrix())

    def test_single_point(self):
        tree = frt_sample(GeneralMetric([[0.0]]), 0)
        assert tree.n_points == 1

    def test_mean_stretch_bounded(self):
        n = 16
        metric = random_metric("general", n, np.random.default_rng(7))
        base = metric.distance_matrix()
        off = ~np.eye(n, dtype=bool)
        stretch = np.mean([
            (frt_sample(metric, seed).distance_matrix()[off] / base[off]).mean()
            for seed in range(30)
        ])
        harmonic = sum(1 / i for i in range(1, n + 1))
        assert stretch <= 16 * SLACK / math.log(2) * harmonic


class TestNearestMatch:
    def test_steal_and_reinsert(self, four_leaf_hst):
        algorithm = NearestMatch(four_leaf_hst, [1, 2])
        first = algorithm.arrive(0)
        assert first.server == 1
        assert first.recourse == 1

        second = algorithm.arrive(1)
        assert algorithm.matching.pairs() == [(0, 2), (1, 1)]
        assert second.recourse == 2
        assert second.rematched == [0]
        assert algorithm.matching.cost == 6
        assert algorithm.check_subtree_discrepancy() is None

    def test_server_events(self, four_leaf_hst):
        algorithm = NearestMatch(four_leaf_hst, [1, 2])
        algorithm.arrive(0)
        algorithm.arrive(1)
        with pytest.raises(InfeasibleError):
            algorithm.depart_server(1)

        assert algorithm.arrive_server(3).recourse == 0
        step = algorithm.depart_server(1)
        assert step.recourse == 1
        assert algorithm.matching.server_of(1) == 3
        assert algorithm.live_servers == {2, 3}
        assert algorithm.check_subtree_discrepancy() is None

    def test_client_departure_without_pull(self, four_leaf_hst):
        algorithm = NearestMatch(four_leaf_hst, [1, 2])
        algorithm.arrive(0)
        algorithm.arrive(3)
        assert algorithm.matching.pairs() == [(0, 1), (3, 2)]
        assert algorithm.depart_client(0).recourse == 0
        assert algorithm.free_servers == {1}

    def test_server_arrival_pulls_client_back(self, four_leaf_hst):
        algorithm = NearestMatch(four_leaf_hst, [2])
        algorithm.arrive(0)
        assert algorithm.pair_level(0) == 3
        step = algorithm.arrive_server(1)
        assert step.rematched == [0]
        assert algorithm.matching.server_of(0) == 1
        assert algorithm.pair_level(0) == 2

    def test_contract_errors(self, four_leaf_hst):
        algorithm = NearestMatch(four_leaf_hst, [1, 2])
        algorithm.arrive(0)
        with pytest.raises(ContractError):
            algorithm.arrive(0)
        with pytest.raises(ContractError):
            algorithm.arrive_server(1)
        with pytest.raises(ContractError):
            algorithm.depart_client(3)
        with pytest.raises(ContractError):
            algorithm.depart_server(3)

    def test_handle_dispatches_events(self, four_leaf_hst):
        algorithm = NearestMatch(four_leaf_hst, [])
        algorithm.handle(Event(seq=0, kind=EventKind.SERVER_ARRIVAL, point=3))
        step = algorithm.handle(Event(seq=1, kind=EventKind.CLIENT_ARRIVAL, point=2))
        assert step.server == 3
        with pytest.raises(InfeasibleError, match="event 2"):
            algorithm.handle(Event(seq=2, kind=EventKind.CLIENT_ARRIVAL, point=0))

    def test_tree_size_must_match(self, four_leaf_hst):
        with pytest.raises(ContractError):
            NearestMatch(LineMetric([0, 1, 2]), [1], tree=four_leaf_hst)

    def test_static_algorithms_reject_departures(self):
        algorithm = Permutation(LineMetric([0, 1]), [1])
        with pytest.raises(UnsupportedEventError):
            algorithm.handle(Event(seq=1, kind=EventKind.CLIENT_DEPARTURE, point=0))

    def test_random_streams_stay_within_depth(self):
        for seed in range(5):
            instance = gen_dynamic(24, 120, seed)
            algorithm = NearestMatch(instance.metric, instance.servers, hst_seed=seed)
            assert instance.events is not None
            for event in instance.events:
                step = algorithm.handle(event)
                assert step.recourse <= algorithm.depth
                assert algorithm.check_subtree_discrepancy() is None

    def test_tree_cost_within_three_of_tree_optimum(self):
        instance = gen_dynamic(20, 80, 3)
        algorithm = NearestMatch(instance.metric, instance.servers, hst_seed=3)
        assert instance.events is not None
        for event in instance.events:
            algorithm.handle(event)
        clients = tuple(algorithm.matching.clients())
        problem = AssignmentProblem(clients, tuple(algorithm.live_servers), algorithm.tree)
        assert algorithm.tree_matching.cost <= 3 * min_cost_matching(problem).cost + 1e-6


class TestDynamicGeneral:
    def test_rows_carry_both_costs(self):
        instance = gen_dynamic(16, 60, 1)
        assert instance.events is not None
        trace = dynamic_general(instance.metric, instance.events, 1, instance.servers)
        assert len(trace.rows) == 60
        assert "tree_alg_cost" in trace.columns
        for row in trace.rows:
            assert row.tree_alg_cost >= row.alg_cost - 1e-9  # type: ignore[attr-defined]

    def test_same_seed_same_trace(self):
        instance = gen_dynamic(16, 40, 2)
        assert instance.events is not None
        first = dynamic_general(instance.metric, instance.events, 9, instance.servers)
        second = dynamic_general(instance.metric, instance.events, 9, instance.servers)
        assert first.rows == second.rows


class TestAcceptanceScale:
    def test_evenly_spaced_line_over_1000_seeds(self):
        n = 32
        metric = LineMetric(list(range(n)))
        base = metric.distance_matrix().astype(np.float64)
        off = ~np.eye(n, dtype=bool)
        max_depth = math.ceil(math.log2(aspect_ratio(metric))) + 2
        stretches = []
        for seed in range(1000):
            tree = frt_sample(metric, seed)
            stretched = tree.distance_matrix()
            assert (stretched >= base).all()
            assert tree.depth <= max_depth
            stretches.append((stretched[off] / base[off]).mean())
        assert np.mean(stretches) <= 8 * math.log(n)

    def test_invariants_on_100_streams(self):
        for seed in range(100):
            instance = gen_dynamic(64, 200, seed)
            algorithm = NearestMatch(instance.metric, instance.servers, hst_seed=seed)
            assert instance.events is not None
            for event in instance.events:
                step = algorithm.handle(event)
                assert step.recourse <= algorithm.depth
                assert algorithm.check_subtree_discrepancy() is None
            clients = tuple(algorithm.matching.clients())
            problem = AssignmentProblem(clients, tuple(algorithm.live_servers), algorithm.tree)
            assert algorithm.tree_matching.cost <= 3 * min_cost_matching(problem).cost + 1e-6

    @pytest.mark.parametrize("seed", range(5))
    def test_tree_cost_after_every_event(self, seed):
        instance = gen_dynamic(64, 200, seed)
        algorithm = NearestMatch(instance.metric, instance.servers, hst_seed=seed)
        trace = replay(algorithm, instance, resolve_checks("all"))
        assert len(trace.rows) == 200
        for row in trace.rows:
            assert row.tree_alg_cost <= 3 * row.tree_opt_cost + 1e-6
