import io
import logging

import pytest
from pydantic import ValidationError
from rich.console import Console

from rematch.adversaries import GeneratedInstance, gen_dynamic, gen_random, gen_star
from rematch.algorithms.batchperm import BatchPerm
from rematch.algorithms.line import FarthestServer
from rematch.algorithms.permutation import Permutation
from rematch.bootstrap import create_algorithm, resolve_checks
from rematch.errors import (
    ContractError,
    InstanceFormatError,
    InvariantViolation,
    RatioUndefinedError,
    UnsupportedEventError,
)
from rematch.events import Event, EventKind, LivePopulation
from rematch.harness.checks import CHECKS, BaseCheck, StepContext
from rematch.harness.dto import TRACE_COLUMNS, RunConfig
from rematch.harness.instance import (
    format_instance,
    parse_instance,
    read_instance,
    write_instance,
)
from rematch.harness.runner import OptTracker, replay, run
from rematch.harness.trace import compute_ratio, emit_trace, read_trace
from rematch.harness.verify import print_report, verify_instance
from rematch.hst import Hst
from rematch.matching import AssignmentProblem, min_cost_matching
from rematch.metrics import LineMetric

SMALL_INSTANCE = """\
# three points on a line
metric line
point 0 0
point 1 5
point 2 9
servers 1 2
clients 0
"""

BAD_TRIANGLE = """\
metric general
n 3
0 5 1
5 0 1
1 1 0
servers 1 2
clients 0
"""


class AlwaysFails(BaseCheck):
    CHECK_ID = "always-fails"
    APPLIES_TO = ("permutation",)

    def check(self, ctx: StepContext) -> str | None:
        return f"{len(ctx.clients)} live client(s)"


def _small_instance() -> GeneratedInstance:
    return parse_instance(SMALL_INSTANCE, "small.txt")


class TestRatio:
    def test_plain(self):
        assert compute_ratio(6, 4) == 1.5

    def test_zero_over_zero(self):
        assert compute_ratio(0, 0) == 0.0

    def test_positive_over_zero(self):
        with pytest.raises(RatioUndefinedError):
            compute_ratio(1, 0)


class TestRunConfig:
    def test_needs_exactly_one_source(self):
        with pytest.raises(ValidationError):
            RunConfig(algorithm="permutation")
        with pytest.raises(ValidationError):
            RunConfig(algorithm="permutation", instance="a.txt", generator="star")

    def test_events_need_instance(self):
        with pytest.raises(ValidationError):
            RunConfig(algorithm="nearest-match", generator="random-dynamic", events="e.jsonl")

    @pytest.mark.parametrize("field", ["seed", "hst_seed"])
    def test_seed_range(self, field):
        with pytest.raises(ValidationError):
            RunConfig(algorithm="permutation", generator="star", **{field: -1})
        with pytest.raises(ValidationError):
            RunConfig(algorithm="permutation", generator="star", **{field: 2**64})

    def test_tree_seed_defaults_to_run_seed(self):
        assert RunConfig(algorithm="nearest-match", generator="star", seed=5).tree_seed == 5
        config = RunConfig(algorithm="nearest-match", generator="star", seed=5, hst_seed=1)
        assert config.tree_seed == 1

    def test_rejects_unknown_fields(self):
        with pytest.raises(ValidationError):
            RunConfig(algorithm="permutation", generator="star", colour="red")


class TestReplay:
    def test_rows_follow_events(self):
        instance = gen_random("line", 10, 6, seed=0)
        trace = replay(Permutation(instance.metric, instance.servers), instance)
        assert [row.seq for row in trace.rows] == list(range(10, 16))
        assert trace.total_recourse == 6
        assert trace.columns == TRACE_COLUMNS
        assert all(row.max_client_recourse == 0 for row in trace.rows)

    def test_failing_check_raises(self):
        instance = _small_instance()
        with pytest.raises(InvariantViolation) as excinfo:
            replay(Permutation(instance.metric, instance.servers), instance, [AlwaysFails()])
        assert excinfo.value.check_id == "always-fails"
        assert excinfo.value.seq == 2
        assert "1 live client(s)" in str(excinfo.value)

    def test_checks_skip_other_algorithms(self):
        instance = _small_instance()
        algorithm = FarthestServer(instance.metric, instance.servers)
        trace = replay(algorithm, instance, [AlwaysFails()])
        assert len(trace.rows) == 1

    def test_batch_mode(self):
        instance = gen_random("line", 20, 10, seed=6)
        algorithm = Permutation(instance.metric, instance.servers)
        trace = replay(algorithm, instance, resolve_checks("all"), batch=4)
        assert [row.step_recourse for row in trace.rows] == [4, 4, 2]
        assert trace.total_recourse == 10
        assert algorithm.batches == [
            instance.clients[:4], instance.clients[4:8], instance.clients[8:]
        ]

    def test_batch_mode_needs_permutation(self):
        instance = gen_random("line", 8, 4, seed=0)
        with pytest.raises(ContractError):
            replay(BatchPerm(instance.metric, instance.servers), instance, batch=2)

    def test_batch_mode_rejects_adaptive_adversary(self):
        instance = gen_star(8)
        with pytest.raises(ContractError, match="adaptively"):
            replay(Permutation(instance.metric, instance.servers), instance, batch=2)

    def test_static_algorithm_on_dynamic_stream(self):
        instance = gen_dynamic(16, 100, 0)
        algorithm = Permutation(instance.metric, instance.servers)
        with pytest.raises(UnsupportedEventError):
            replay(algorithm, instance)

    def test_star_adversary_through_run(self):
        trace = run(RunConfig(algorithm="permutation", generator="star", params={"n": "8"}))
        assert [row.alg_cost for row in trace.rows] == [1, 3, 5, 7, 9, 11, 13, 15]

    def test_run_is_deterministic(self):
        config = RunConfig(
            algorithm="nearest-match",
            generator="random-dynamic",
            params={"n_points": "16", "n_events": "50"},
            seed=3,
        )
        assert run(config).rows == run(config).rows

    def test_run_from_files(self, tmp_path):
        instance = gen_dynamic(12, 40, 5)
        write_instance(instance, tmp_path / "dyn.txt", tmp_path / "dyn.jsonl")
        config = RunConfig(
            algorithm="nearest-match",
            instance=tmp_path / "dyn.txt",
            events=tmp_path / "dyn.jsonl",
            seed=5,
        )
        direct = run(RunConfig(
            algorithm="nearest-match",
            generator="random-dynamic",
            params={"n_points": "12", "n_events": "40"},
            seed=5,
        ))
        assert [r.alg_cost for r in run(config).rows] == [r.alg_cost for r in direct.rows]


class TestOptTracker:
    def test_agrees_with_recomputation(self):
        instance = gen_dynamic(14, 80, 2)
        assert instance.events is not None
        tracker = OptTracker(instance.metric, instance.servers)
        population = LivePopulation(instance.metric.n_points, instance.servers)
        for event in instance.events:
            population.apply(event)
            problem = AssignmentProblem(
                tuple(population.clients), tuple(sorted(population.servers)), instance.metric
            )
            assert tracker.update(event, population) == pytest.approx(
                min_cost_matching(problem).cost
            )


class TestTraceFiles:
    def test_csv(self, tmp_path):
        instance = gen_random("line", 12, 8, seed=1)
        trace = replay(Permutation(instance.metric, instance.servers), instance)
        emit_trace(trace, "csv", tmp_path / "trace.csv")
        header = (tmp_path / "trace.csv").read_text().splitlines()[0]
        assert header == ",".join(TRACE_COLUMNS)
        assert read_trace(tmp_path / "trace.csv", "csv") == trace.rows

    def test_jsonl_keeps_tree_columns(self, tmp_path):
        trace = run(RunConfig(
            algorithm="nearest-match",
            generator="random-dynamic",
            params={"n_points": "10", "n_events": "30"},
        ))
        emit_trace(trace, "jsonl", tmp_path / "trace.jsonl")
        assert read_trace(tmp_path / "trace.jsonl", "jsonl") == trace.rows


class TestInstanceFiles:
    def test_parse(self):
        instance = _small_instance()
        assert isinstance(instance.metric, LineMetric)
        assert instance.servers == [1, 2]
        assert instance.clients == [0]
        assert instance.name == "small"

    def test_format_parses_back(self):
        instance = _small_instance()
        again = parse_instance(format_instance(instance))
        assert again.metric.coordinates == instance.metric.coordinates
        assert (again.servers, again.clients) == (instance.servers, instance.clients)

    def test_hst_metric_section(self, tmp_path, four_leaf_hst):
        instance = GeneratedInstance(metric=four_leaf_hst, servers=[1, 2], clients=[0, 3])
        write_instance(instance, tmp_path / "tree.txt")
        loaded = read_instance(tmp_path / "tree.txt")
        assert isinstance(loaded.metric, Hst)
        assert loaded.metric.distance(0, 3) == 6.0
        assert loaded.clients == [0, 3]

    @pytest.mark.parametrize(
        ("text", "message"),
        [
            ("metric line\npoint 0 0\npoint 1 1\nclients 0\n", "missing `servers`"),
            ("metric line\npoint 0 0\npoint 1 1\nservers 1\nadversary star\n", "star metric"),
            ("metric star\nleaves 2\nservers 1 2\nadversary chess\n", "unknown adversary"),
            ("metric line\npoint 0 0\npoint 1 1\npoint 2 2\nservers 1\nclients 0 2\n",
             "no free server"),
            ("metric line\npoint 0 0\npoint 1 1\nservers 1\nclients 0\nclients 0\n",
             "unexpected line"),
            ("metric line\npoint 0 0\npoint 1 1\nservers 7\n", "outside the metric"),
        ],
        ids=["no-servers", "star-on-line", "unknown-adversary", "infeasible", "repeated",
             "bad-id"],
    )
    def test_rejects(self, text, message):
        with pytest.raises(InstanceFormatError, match=message):
            parse_instance(text)

    def test_events_round_trip(self, tmp_path):
        instance = gen_dynamic(12, 30, 1)
        write_instance(instance, tmp_path / "dyn.txt", tmp_path / "dyn.jsonl")
        loaded = read_instance(tmp_path / "dyn.txt", tmp_path / "dyn.jsonl")
        assert loaded.events == instance.events
        assert loaded.servers == instance.servers

    def test_events_need_a_path(self, tmp_path):
        with pytest.raises(InstanceFormatError):
            write_instance(gen_dynamic(8, 10, 0), tmp_path / "dyn.txt")

    def test_events_replace_clients(self, tmp_path):
        (tmp_path / "inst.txt").write_text(SMALL_INSTANCE)
        (tmp_path / "events.jsonl").write_text("")
        with pytest.raises(InstanceFormatError, match="replaces the client list"):
            read_instance(tmp_path / "inst.txt", tmp_path / "events.jsonl")

    def test_bad_event_line(self, tmp_path):
        (tmp_path / "inst.txt").write_text("metric line\npoint 0 0\npoint 1 1\nservers 1\n")
        (tmp_path / "events.jsonl").write_text('{"seq": 1, "kind": "teleport", "point": 0}\n')
        with pytest.raises(InstanceFormatError, match="events.jsonl:1"):
            read_instance(tmp_path / "inst.txt", tmp_path / "events.jsonl")


class TestVerify:
    def test_valid_instance(self, tmp_path):
        path = tmp_path / "inst.txt"
        path.write_text(SMALL_INSTANCE)
        report = verify_instance(path)
        assert report.ok
        assert report.passed == ["metric", "feasibility"]
        assert report.aspect == 9 / 4

    def test_triangle_violation(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text(BAD_TRIANGLE)
        report = verify_instance(path)
        assert not report.ok
        assert [name for name, _ in report.problems] == ["metric"]
        assert "triangle" in report.problems[0][1]

    def test_departure_stream(self, tmp_path):
        (tmp_path / "inst.txt").write_text("metric line\npoint 0 0\npoint 1 1\nservers 1\n")
        (tmp_path / "events.jsonl").write_text(
            '{"seq": 1, "kind": "server_departure", "point": 1}\n'
            '{"seq": 2, "kind": "client_arrival", "point": 0}\n'
        )
        report = verify_instance(tmp_path / "inst.txt", tmp_path / "events.jsonl")
        assert [name for name, _ in report.problems] == ["feasibility"]

    def test_report_rendering(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text(BAD_TRIANGLE)
        out = io.StringIO()
        print_report(verify_instance(path), Console(file=out, width=120))
        text = out.getvalue()
        assert "triangle" in text
        assert "1 check(s) failed" in text


class TestBootstrap:
    def test_unknown_algorithm(self):
        with pytest.raises(ContractError, match="unknown algorithm"):
            create_algorithm("greedy", LineMetric([0, 1]), [1])

    def test_batchperm_gets_base(self):
        algorithm = create_algorithm("batchperm", LineMetric([0, 1]), [1], d=5)
        assert isinstance(algorithm, BatchPerm)
        assert algorithm.d == 5

    def test_resolve_all(self):
        assert len(resolve_checks("all")) == len(CHECKS) == 12

    def test_resolve_skips_unknown(self, caplog):
        with caplog.at_level(logging.WARNING):
            checks = resolve_checks(["sweep", "nope", "none", " "])
        assert [c.CHECK_ID for c in checks] == ["sweep"]
        assert "nope" in caplog.text

    def test_static_algorithm_rejects_server_arrival(self):
        instance = GeneratedInstance(
            metric=LineMetric([0, 1]),
            servers=[1],
            events=[Event(seq=1, kind=EventKind.SERVER_ARRIVAL, point=0)],
        )
        with pytest.raises(UnsupportedEventError):
            replay(Permutation(instance.metric, instance.servers), instance)
