"""Exception hierarchy for rematch.

Every error raised on purpose by the library derives from RematchError so the CLI can
map it to an exit code in one place.
"""

from __future__ import annotations


class RematchError(Exception):
    """Base class for all library errors."""


class InvalidPointError(RematchError, IndexError):
    """Point id outside the owning metric."""


class MetricError(RematchError, ValueError):
    """Malformed or invalid metric (duplicate line coordinates, bad table shape...)."""


class DomainError(RematchError, ValueError):
    """Operation called outside its domain."""


class InfeasibleError(RematchError):
    """Not enough free servers for the clients present."""

    def __init__(self, message: str, seq: int | None = None) -> None:
        self.seq = seq
        if seq is not None:
            message = f"event {seq}: {message}"
        super().__init__(message)


class SizeError(RematchError, ValueError):
    """Instance too large for an exhaustive routine."""


class ContractError(RematchError, ValueError):
    """Caller broke a documented precondition."""


class UnsupportedEventError(RematchError):
    """Event kind the receiving algorithm cannot process."""


class InstanceFormatError(RematchError, ValueError):
    """Parse error in an instance, metric, HST or event file."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None) -> None:
        self.path = path
        self.line = line
        where = path or "<input>"
        if line is not None:
            where = f"{where}:{line}"
        super().__init__(f"{where}: {message}")


class RatioUndefinedError(RematchError, ArithmeticError):
    """Algorithm cost is positive while the optimum is zero."""


class InvariantViolation(RematchError):
    """An enabled invariant checker failed."""

    def __init__(self, check_id: str, seq: int, detail: str) -> None:
        self.check_id = check_id
        self.seq = seq
        self.detail = detail
        super().__init__(f"[{check_id}] after event {seq}: {detail}")
