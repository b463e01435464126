"""Invariant checkers run after every trace row.

Each checker is a class implementing BaseCheck; a checker that does not apply to the
running algorithm is skipped. `check` returns None when the invariant holds and a
description of the violation otherwise.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

from rematch.algorithms import OnlineAlgorithm, StepResult
from rematch.algorithms.batchperm import BatchPerm, block_decomposition
from rematch.algorithms.line import FarthestServer, LineAlgorithm, RecursiveCancel
from rematch.algorithms.nearest_match import NearestMatch
from rematch.algorithms.permutation import Permutation
from rematch.harness.dto import DynamicRow, TraceRow
from rematch.matching import AssignmentProblem, cost_le, is_server_optimal
from rematch.metrics import PointId

logger = logging.getLogger(__name__)

PERMUTATION_BASED = ("permutation", "batchperm", "farthest-server", "recursive-cancel")
LINE = ("farthest-server", "recursive-cancel")


@dataclass
class StepContext:
    algorithm: OnlineAlgorithm
    step: StepResult
    row: TraceRow
    clients: list[PointId]  # live, in arrival order
    servers: list[PointId]  # live
    arrivals: int  # client arrivals so far
    batches: int  # batches fed so far (one per arrival outside batch mode)
    previous_servers: frozenset[PointId]  # servers used by the matching before the step


class BaseCheck(ABC):
    """Base class for invariant checkers."""

    CHECK_ID: str
    APPLIES_TO: tuple[str, ...]

    def __init_subclass__(cls) -> None:
        """Validate subclass declares its id and scope."""
        super().__init_subclass__()

        if not hasattr(cls, "CHECK_ID"):
            raise NotImplementedError(f"{cls.__name__}: missing CHECK_ID class attribute")
        if not hasattr(cls, "APPLIES_TO"):
            raise NotImplementedError(f"{cls.__name__}: missing APPLIES_TO class attribute")

    @property
    def logger(self) -> logging.Logger:
        return logging.getLogger(f"rematch.harness.checks.{self.CHECK_ID}")

    def applies(self, algorithm: OnlineAlgorithm) -> bool:
        return algorithm.ALGORITHM_ID in self.APPLIES_TO

    @abstractmethod
    def check(self, ctx: StepContext) -> str | None: ...


class ServerOptimalCheck(BaseCheck):
    CHECK_ID = "server-optimal"
    APPLIES_TO = PERMUTATION_BASED

    def check(self, ctx: StepContext) -> str | None:
        metric = ctx.algorithm.metric
        problem = AssignmentProblem(tuple(ctx.clients), tuple(ctx.servers), metric)
        if not is_server_optimal(ctx.algorithm.matching, problem):
            used = sorted(ctx.algorithm.matching.servers())
            return f"server set {used} is not the server set of an optimal matching"
        return None


class NestingCheck(BaseCheck):
    CHECK_ID = "nesting"
    APPLIES_TO = PERMUTATION_BASED

    def check(self, ctx: StepContext) -> str | None:
        dropped = ctx.previous_servers - ctx.algorithm.matching.servers()
        if dropped:
            return f"servers {sorted(dropped)} left the used set"
        return None


class BatchCostCheck(BaseCheck):
    """A batch costs at most twice the current optimum."""

    CHECK_ID = "batch-cost"
    APPLIES_TO = ("permutation",)

    def check(self, ctx: StepContext) -> str | None:
        assert isinstance(ctx.algorithm, Permutation)
        batch_cost = ctx.algorithm.last_batch_cost
        if not cost_le(batch_cost, 2 * ctx.row.opt_cost, ctx.algorithm.metric.is_exact):
            return f"batch cost {batch_cost} exceeds 2·OPT = {2 * ctx.row.opt_cost}"
        return None


class CompetitiveCheck(BaseCheck):
    """Cost against the proven factor: 3 on the line and on the tree metric, 2m-1 for
    Permutation after m batches."""

    CHECK_ID = "competitive"
    APPLIES_TO = ("permutation", "farthest-server", "recursive-cancel", "nearest-match")

    def check(self, ctx: StepContext) -> str | None:
        row = ctx.row
        exact = ctx.algorithm.metric.is_exact
        if isinstance(ctx.algorithm, NearestMatch):
            assert isinstance(row, DynamicRow)
            if not cost_le(row.tree_alg_cost, 3 * row.tree_opt_cost, False):
                return f"tree cost {row.tree_alg_cost} exceeds 3·OPT_T = {3 * row.tree_opt_cost}"
            return None
        factor = 2 * ctx.batches - 1 if isinstance(ctx.algorithm, Permutation) else 3
        if not cost_le(row.alg_cost, factor * row.opt_cost, exact):
            return f"cost {row.alg_cost} exceeds {factor}·OPT = {factor * row.opt_cost}"
        return None


class BlockEquivalenceCheck(BaseCheck):
    """BatchPerm equals Permutation fed the base-d block decomposition of t."""

    CHECK_ID = "block-equivalence"
    APPLIES_TO = ("batchperm",)

    def check(self, ctx: StepContext) -> str | None:
        algorithm = ctx.algorithm
        assert isinstance(algorithm, BatchPerm)
        reference = Permutation(algorithm.metric, algorithm.servers)
        start = 0
        for size in block_decomposition(algorithm.t, algorithm.d):
            reference.arrive_batch(algorithm.clients[start : start + size])
            start += size
        if reference.matching != algorithm.matching:
            return (
                f"matching {algorithm.matching.pairs()} differs from block-fed Permutation "
                f"{reference.matching.pairs()}"
            )
        return None


def _ceil_log(t: int, d: int) -> int:
    e = 0
    while d**e < t:
        e += 1
    return e


class RecourseBoundCheck(BaseCheck):
    CHECK_ID = "recourse-bound"
    APPLIES_TO = ("batchperm", "farthest-server", "recursive-cancel", "nearest-match")

    def check(self, ctx: StepContext) -> str | None:
        algorithm, k = ctx.algorithm, ctx.arrivals
        total = ctx.row.cum_recourse
        if isinstance(algorithm, NearestMatch):
            if ctx.step.recourse > algorithm.depth:
                return f"step recourse {ctx.step.recourse} exceeds tree depth {algorithm.depth}"
            return None
        if isinstance(algorithm, BatchPerm):
            per_client = _ceil_log(k, algorithm.d)
            if algorithm.max_client_rematches > per_client:
                return (
                    f"a client was rematched {algorithm.max_client_rematches} times, "
                    f"bound ⌈log_{algorithm.d} {k}⌉ = {per_client}"
                )
            bound = k * (1 + math.log(k, algorithm.d)) if k else 0.0
        else:
            bound = 2 * k * (1 + math.log2(2 * k)) + 2 * k if k else 0.0
        if total > bound + 1e-9:
            return f"total recourse {total} exceeds {bound:.2f} after {k} arrivals"
        return None


class FreeServerCheck(BaseCheck):
    CHECK_ID = "free-server"
    APPLIES_TO = LINE

    def check(self, ctx: StepContext) -> str | None:
        assert isinstance(ctx.algorithm, LineAlgorithm)
        return ctx.algorithm.check_no_free_server_inside_arcs()


class SweepCheck(BaseCheck):
    CHECK_ID = "sweep"
    APPLIES_TO = ("farthest-server",)

    def check(self, ctx: StepContext) -> str | None:
        assert isinstance(ctx.algorithm, FarthestServer)
        return ctx.algorithm.check_sweep()


class ArcMotionCheck(BaseCheck):
    CHECK_ID = "arc-motion"
    APPLIES_TO = LINE

    def check(self, ctx: StepContext) -> str | None:
        assert isinstance(ctx.algorithm, LineAlgorithm)
        return ctx.algorithm.check_arc_motion()


class BackwardFinalCheck(BaseCheck):
    CHECK_ID = "backward-final"
    APPLIES_TO = LINE

    def check(self, ctx: StepContext) -> str | None:
        assert isinstance(ctx.algorithm, LineAlgorithm)
        return ctx.algorithm.check_backward_final()


class RedundancyCheck(BaseCheck):
    CHECK_ID = "redundancy"
    APPLIES_TO = ("recursive-cancel",)

    def check(self, ctx: StepContext) -> str | None:
        assert isinstance(ctx.algorithm, RecursiveCancel)
        return ctx.algorithm.check_redundancy()


class SubtreeDiscrepancyCheck(BaseCheck):
    CHECK_ID = "subtree-discrepancy"
    APPLIES_TO = ("nearest-match",)

    def check(self, ctx: StepContext) -> str | None:
        assert isinstance(ctx.algorithm, NearestMatch)
        return ctx.algorithm.check_subtree_discrepancy()


def _validate_check(check_class: type[BaseCheck], name: str) -> None:
    if check_class.CHECK_ID != name:
        raise TypeError(f"{name}: registered under a different CHECK_ID ({check_class.CHECK_ID})")
    logger.debug(f"✓ {name}: applies to {', '.join(check_class.APPLIES_TO)}")


def _build_registry() -> dict[str, BaseCheck]:
    """Build CHECKS registry with validation and instantiation."""
    check_classes: list[type[BaseCheck]] = [
        ServerOptimalCheck,
        NestingCheck,
        BatchCostCheck,
        CompetitiveCheck,
        BlockEquivalenceCheck,
        RecourseBoundCheck,
        FreeServerCheck,
        SweepCheck,
        ArcMotionCheck,
        BackwardFinalCheck,
        RedundancyCheck,
        SubtreeDiscrepancyCheck,
    ]

    registry = {}
    for cls in check_classes:
        _validate_check(cls, cls.CHECK_ID)
        registry[cls.CHECK_ID] = cls()

    logger.info(f"Check registry initialized with {len(registry)} checks")
    return registry


CHECKS: dict[str, BaseCheck] = _build_registry()
