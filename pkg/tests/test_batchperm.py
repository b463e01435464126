import math

import pytest

from rematch.adversaries import (
    StarAdversary,
    gen_batchperm_tight,
    gen_random,
    gen_star,
    path_diagnostic,
)
from rematch.algorithms.batchperm import (
    BatchPerm,
    block_boundaries,
    block_decomposition,
    block_exponent,
)
from rematch.algorithms.permutation import Permutation
from rematch.bootstrap import resolve_checks
from rematch.errors import DomainError
from rematch.harness.runner import replay
from rematch.metrics import LineMetric, StarMetric


class TestBlocks:
    @pytest.mark.parametrize(
        ("t", "d", "expected"), [(12, 2, 2), (7, 2, 0), (9, 3, 2), (1, 5, 0), (16, 2, 4)]
    )
    def test_block_exponent(self, t, d, expected):
        assert block_exponent(t, d) == expected

    def test_block_exponent_domain(self):
        with pytest.raises(DomainError):
            block_exponent(0, 2)
        with pytest.raises(DomainError):
            block_exponent(4, 1)

    def test_decomposition(self):
        assert block_decomposition(11, 2) == [8, 2, 1]
        assert block_decomposition(5, 3) == [3, 1, 1]
        assert block_decomposition(0, 2) == []
        assert block_boundaries(11, 2) == [0, 8, 10, 11]

    def test_last_block_is_d_to_the_exponent(self):
        for t in range(1, 100):
            assert block_decomposition(t, 3)[-1] == 3 ** block_exponent(t, 3)
            assert sum(block_decomposition(t, 3)) == t


class TestBatchPerm:
    def test_base_must_be_at_least_two(self):
        with pytest.raises(DomainError):
            BatchPerm(LineMetric([0, 1]), [1], d=1)

    def test_first_arrival(self):
        algorithm = BatchPerm(LineMetric([0, 2, 5]), [1, 2])
        step = algorithm.arrive(0)
        assert step.server == 1
        assert step.recourse == 1
        assert algorithm.t == 1

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_equals_permutation_on_blocks(self, d):
        instance = gen_random("general", 30, 25, seed=d)
        algorithm = BatchPerm(instance.metric, instance.servers, d=d)
        for t, client in enumerate(instance.clients, start=1):
            algorithm.arrive(client)
            reference = Permutation(instance.metric, instance.servers)
            bounds = block_boundaries(t, d)
            for lo, hi in zip(bounds, bounds[1:], strict=False):
                reference.arrive_batch(instance.clients[lo:hi])
            assert reference.matching == algorithm.matching

    @pytest.mark.parametrize("d", [2, 3])
    def test_per_client_rematches_logarithmic(self, d):
        instance = gen_random("line", 64, 64, seed=11)
        algorithm = BatchPerm(instance.metric, instance.servers, d=d)
        total = 0
        for client in instance.clients:
            total += algorithm.arrive(client).recourse
        k = len(instance.clients)
        assert algorithm.max_client_rematches <= math.ceil(math.log(k, d))
        assert total <= k * (1 + math.log(k, d))

    def test_star_ratio_logarithmic(self):
        instance = gen_star(16)
        trace = replay(BatchPerm(instance.metric, instance.servers), instance)
        assert trace.max_ratio <= 2 * math.log2(16) + 1

    def test_star_ratio_at_scale(self):
        instance = gen_star(256)
        trace = replay(BatchPerm(instance.metric, instance.servers), instance)
        assert all(row.opt_cost == 1 for row in trace.rows)
        assert trace.max_ratio <= 2 * math.log2(256) + 1

    def test_star_chain_stays_short(self):
        metric = StarMetric(256)
        algorithm = BatchPerm(metric, list(metric.leaves()), d=2)
        adversary = StarAdversary(metric)
        history = []
        while not adversary.exhausted:
            algorithm.arrive(adversary.next_client(algorithm.matching))
            history.append(algorithm.matching.copy())
        lengths = path_diagnostic(history)
        assert len(lengths) == 256
        assert max(lengths) <= 2 * math.log2(256) + 1

    def test_all_checks_pass(self):
        instance = gen_random("line", 40, 27, seed=2)
        algorithm = BatchPerm(instance.metric, instance.servers, d=3)
        trace = replay(algorithm, instance, resolve_checks("all"))
        assert len(trace.rows) == 27


class TestTightInstance:
    def test_structure(self):
        instance = gen_batchperm_tight(9, 3)
        n_servers = len(instance.servers)
        assert n_servers == 10 + 9
        core = [c for c in instance.clients if n_servers <= c < n_servers + 9]
        assert len(core) == 9
        assert len(set(instance.clients)) == len(instance.clients)
        assert len(instance.clients) <= n_servers

    def test_recourse_at_least_core_size(self):
        instance = gen_batchperm_tight(9, 3)
        trace = replay(BatchPerm(instance.metric, instance.servers, d=3), instance)
        assert trace.total_recourse >= 9

    def test_hand_trace(self):
        instance = gen_batchperm_tight(3, 3)
        assert [instance.metric.coordinate(c) for c in instance.clients] == [1, 9, -9]
        trace = replay(BatchPerm(instance.metric, instance.servers, d=3), instance)
        assert [row.alg_cost for row in trace.rows] == [7, 24, 15]
        assert [row.opt_cost for row in trace.rows] == [7, 10, 15]

    def test_ratio_at_all_ones_time(self):
        k, d = 27, 3
        instance = gen_batchperm_tight(k, d)
        trace = replay(BatchPerm(instance.metric, instance.servers, d=d), instance)
        row = trace.rows[12]  # t = 13 = 111 in base 3
        assert (row.alg_cost, row.opt_cost) == (233, 55)
        assert row.ratio >= 2
        assert trace.total_recourse >= k

    def test_binary_base_interleaves_auxiliary_clients(self):
        instance = gen_batchperm_tight(8, 2)
        assert len(instance.servers) == 16
        assert instance.clients == [16, 17, 18, 24, 19, 20, 21, 25, 22, 23]
        trace = replay(BatchPerm(instance.metric, instance.servers, d=2), instance,
                       resolve_checks("all"))
        assert trace.total_recourse >= 8

    @pytest.mark.parametrize(("k", "d"), [(9, 2), (8, 3), (10, 3), (16, 4)])
    def test_rejects_bad_parameters(self, k, d):
        with pytest.raises(DomainError):
            gen_batchperm_tight(k, d)
