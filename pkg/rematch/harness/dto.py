"""Data Transfer Objects for runs and traces."""

from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from rematch.metrics import Distance

TRACE_COLUMNS = (
    "seq",
    "alg_cost",
    "opt_cost",
    "ratio",
    "step_recourse",
    "cum_recourse",
    "max_client_recourse",
)
TREE_COLUMNS = ("tree_alg_cost", "tree_opt_cost")


@dataclass
class TraceRow:
    seq: int
    alg_cost: Distance
    opt_cost: Distance
    ratio: float
    step_recourse: int
    cum_recourse: int
    max_client_recourse: int

    def as_dict(self) -> dict[str, Distance]:
        return asdict(self)


@dataclass
class DynamicRow(TraceRow):
    """Row of a NearestMatch run, with costs measured in the tree metric as well."""

    tree_alg_cost: Distance = 0.0
    tree_opt_cost: Distance = 0.0


@dataclass
class RunTrace:
    algorithm: str
    instance: str
    rows: list[TraceRow] = field(default_factory=list)

    @property
    def total_recourse(self) -> int:
        return self.rows[-1].cum_recourse if self.rows else 0

    @property
    def max_ratio(self) -> float:
        return max((row.ratio for row in self.rows), default=0.0)

    @property
    def columns(self) -> tuple[str, ...]:
        if self.rows and isinstance(self.rows[0], DynamicRow):
            return TRACE_COLUMNS + TREE_COLUMNS
        return TRACE_COLUMNS


class RunConfig(BaseModel):
    """Everything that determines a run; two equal configs give identical traces."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    algorithm: str
    instance: Path | None = None
    events: Path | None = None
    generator: str | None = None
    params: dict[str, str] = Field(default_factory=dict)
    seed: int = Field(default=0, ge=0, lt=2**64)
    d: int = Field(default=2, ge=2)
    batch: int | None = Field(default=None, ge=1)
    hst_seed: int | None = Field(default=None, ge=0, lt=2**64)
    checks: list[str] | Literal["all"] = "all"

    @model_validator(mode="after")
    def _one_source(self) -> "RunConfig":
        if (self.instance is None) == (self.generator is None):
            raise ValueError("exactly one of instance or generator must be given")
        if self.events is not None and self.instance is None:
            raise ValueError("an events file needs an instance file")
        return self

    @property
    def tree_seed(self) -> int:
        return self.seed if self.hst_seed is None else self.hst_seed
