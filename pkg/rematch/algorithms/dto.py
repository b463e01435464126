"""Data Transfer Objects for online algorithms."""

from dataclasses import dataclass, field

from rematch.matching import Matching
from rematch.metrics import PointId


@dataclass
class StepResult:
    recourse: int  # clients whose server changed this step, the new client included
    rematched: list[PointId] = field(default_factory=list)  # previously matched clients only
    server: PointId | None = None  # server given to the arriving client, if any


@dataclass
class BatchOutcome:
    new_servers: list[PointId]  # S_cur, in insertion order
    local_matching: Matching
    recourse: int


@dataclass
class Checkpoint:
    matching: Matching
    used_servers: frozenset[PointId]  # S*_t at the checkpoint


@dataclass
class StepChanges:
    client_moves: list[tuple[PointId, PointId | None, PointId]] = field(default_factory=list)
    server_moves: list[tuple[PointId, PointId | None, PointId]] = field(default_factory=list)
