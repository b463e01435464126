"""Replay an instance through one algorithm, tracking OPT and running checks."""

import logging
from collections import Counter
from collections.abc import Iterable, Iterator, Sequence

from rematch.adversaries import GENERATORS, GeneratedInstance, StarAdversary
from rematch.algorithms import OnlineAlgorithm, StepResult
from rematch.algorithms.nearest_match import NearestMatch
from rematch.algorithms.permutation import Permutation
from rematch.bootstrap import create_algorithm, resolve_checks
from rematch.errors import ContractError, InvariantViolation, UnsupportedEventError
from rematch.events import Event, EventKind, LivePopulation, arrival_events
from rematch.harness.checks import BaseCheck, StepContext
from rematch.harness.dto import DynamicRow, RunConfig, RunTrace, TraceRow
from rematch.harness.instance import read_instance
from rematch.harness.trace import compute_ratio
from rematch.matching import AssignmentProblem, IncrementalSolver, min_cost_matching
from rematch.metrics import Distance, MetricSpace, PointId, StarMetric

logger = logging.getLogger(__name__)


class OptTracker:
    """Optimal cost of the live population.

    Stays incremental while only clients arrive and recomputes from scratch after the
    first event of any other kind.
    """

    def __init__(self, metric: MetricSpace, servers: Sequence[PointId]) -> None:
        self.metric = metric
        self._solver: IncrementalSolver | None = IncrementalSolver(metric, servers)

    def update(self, event: Event, population: LivePopulation) -> Distance:
        if self._solver is not None and event.kind == EventKind.CLIENT_ARRIVAL:
            self._solver.add_client(event.point)
            return self._solver.cost
        if self._solver is not None:
            logger.debug(f"event {event.seq} ({event.kind}): OPT recomputed from now on")
        self._solver = None
        problem = AssignmentProblem(
            tuple(population.clients), tuple(sorted(population.servers)), self.metric
        )
        return min_cost_matching(problem).cost


def load_instance(config: RunConfig) -> GeneratedInstance:
    if config.generator is not None:
        if config.generator not in GENERATORS:
            raise ContractError(
                f"unknown generator {config.generator!r}; available: {sorted(GENERATORS)}"
            )
        return GENERATORS[config.generator].generate(config.params, config.seed)
    assert config.instance is not None
    return read_instance(config.instance, config.events)


def _event_source(instance: GeneratedInstance, algorithm: OnlineAlgorithm) -> Iterator[Event]:
    """Events after the server prefix; adversary clients are drawn lazily so each one
    sees the matching left by the previous step."""
    start = len(instance.servers)
    if instance.events is not None:
        yield from instance.events
        return
    if instance.adversary == "star":
        assert isinstance(instance.metric, StarMetric)
        adversary = StarAdversary(instance.metric)
        seq = start
        while not adversary.exhausted:
            yield Event(seq=seq, kind=EventKind.CLIENT_ARRIVAL,
                        point=adversary.next_client(algorithm.matching))
            seq += 1
        return
    yield from arrival_events([], instance.clients, start_seq=start)


def _batched(events: Iterable[Event], size: int | None) -> Iterator[list[Event]]:
    if size is None:
        for event in events:
            yield [event]
        return
    batch: list[Event] = []
    for event in events:
        if event.kind != EventKind.CLIENT_ARRIVAL:
            raise UnsupportedEventError(
                f"event {event.seq}: batch mode takes client arrivals only"
            )
        batch.append(event)
        if len(batch) == size:
            yield batch
            batch = []
    if batch:
        yield batch


def replay(
    algorithm: OnlineAlgorithm,
    instance: GeneratedInstance,
    checks: Sequence[BaseCheck] = (),
    batch: int | None = None,
) -> RunTrace:
    """Feed the instance to `algorithm`; one trace row per event (per batch in batch mode)."""
    if batch is not None and not isinstance(algorithm, Permutation):
        raise ContractError(f"batch mode needs permutation, got {algorithm.ALGORITHM_ID}")
    if batch is not None and instance.adversary is not None:
        # an adaptive client would see the matching from before its batch started
        raise ContractError(
            f"batch mode needs a fixed client sequence; {instance.name} draws clients "
            f"adaptively from the {instance.adversary} adversary"
        )

    metric = instance.metric
    population = LivePopulation(metric.n_points, instance.servers)
    opt = OptTracker(metric, instance.servers)
    tree_opt = None
    if isinstance(algorithm, NearestMatch):
        tree_opt = OptTracker(algorithm.tree, instance.servers)
    active = [check for check in checks if check.applies(algorithm)]

    trace = RunTrace(algorithm=algorithm.ALGORITHM_ID, instance=instance.name)
    rematches: Counter[PointId] = Counter()
    cumulative = arrivals = batches = 0

    for group in _batched(_event_source(instance, algorithm), batch):
        previous = algorithm.matching.servers()
        for event in group:
            population.apply(event)

        if batch is not None:
            assert isinstance(algorithm, Permutation)
            outcome = algorithm.arrive_batch([e.point for e in group])
            step = StepResult(recourse=outcome.recourse)
        else:
            step = algorithm.handle(group[0])

        opt_cost: Distance = 0
        tree_opt_cost: Distance = 0.0
        for event in group:
            opt_cost = opt.update(event, population)
            if tree_opt is not None:
                tree_opt_cost = tree_opt.update(event, population)
        arrivals += sum(1 for e in group if e.kind == EventKind.CLIENT_ARRIVAL)
        batches += 1
        cumulative += step.recourse
        rematches.update(step.rematched)

        alg_cost = algorithm.matching.cost
        fields = {
            "seq": group[-1].seq,
            "alg_cost": alg_cost,
            "opt_cost": opt_cost,
            "ratio": compute_ratio(alg_cost, opt_cost),
            "step_recourse": step.recourse,
            "cum_recourse": cumulative,
            "max_client_recourse": max(rematches.values(), default=0),
        }
        if isinstance(algorithm, NearestMatch):
            row: TraceRow = DynamicRow(
                **fields,
                tree_alg_cost=algorithm.tree_matching.cost,
                tree_opt_cost=tree_opt_cost,
            )
        else:
            row = TraceRow(**fields)
        trace.rows.append(row)

        ctx = StepContext(
            algorithm=algorithm,
            step=step,
            row=row,
            clients=list(population.clients),
            servers=sorted(population.servers),
            arrivals=arrivals,
            batches=batches,
            previous_servers=previous,
        )
        for check in active:
            detail = check.check(ctx)
            if detail is not None:
                raise InvariantViolation(check.CHECK_ID, row.seq, detail)

    logger.info(
        f"Run finished: {algorithm.ALGORITHM_ID} on {instance.name or 'instance'}, "
        f"{len(trace.rows)} rows, total recourse {trace.total_recourse}, "
        f"max ratio {trace.max_ratio:.4f}"
    )
    return trace


def run(config: RunConfig) -> RunTrace:
    """Resolve the configuration, replay the instance and return the trace."""
    instance = load_instance(config)
    algorithm = create_algorithm(
        config.algorithm,
        instance.metric,
        instance.servers,
        d=config.d,
        hst_seed=config.tree_seed,
    )
    checks = resolve_checks(config.checks)
    logger.info(
        f"Running {config.algorithm} on {instance.name or config.instance} "
        f"with {len(checks)} check(s) enabled"
    )
    return replay(algorithm, instance, checks, batch=config.batch)
