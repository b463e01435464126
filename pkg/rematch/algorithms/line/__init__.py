from rematch.algorithms.line.arcs import (
    Arc,
    Direction,
    IntervalStats,
    check_no_free_server_inside_arcs,
    check_no_opposite_overlap,
    crossing_counts,
    interval_decomposition,
    make_arc,
    matching_arcs,
)
from rematch.algorithms.line.base import LineAlgorithm
from rematch.algorithms.line.cancel import farthest_server_cancel, overlap_region, recursive_cancel
from rematch.algorithms.line.farthest_server import FarthestServer
from rematch.algorithms.line.recursive import RecursiveCancel
from rematch.algorithms.line.redundancy import (
    LabelSegment,
    RedundancyLabeling,
    RedundancyLedger,
    check_redundant_cost,
    check_redundant_counts,
    check_suffix_domination,
)
from rematch.algorithms.line.sweep import (
    Role,
    SweepPoint,
    SweepResult,
    check_disjoint,
    new_forward_arcs,
    sweep,
)

__all__ = [
    "Arc",
    "Direction",
    "FarthestServer",
    "IntervalStats",
    "LabelSegment",
    "LineAlgorithm",
    "RecursiveCancel",
    "RedundancyLabeling",
    "RedundancyLedger",
    "Role",
    "SweepPoint",
    "SweepResult",
    "check_disjoint",
    "check_no_free_server_inside_arcs",
    "check_no_opposite_overlap",
    "check_redundant_cost",
    "check_redundant_counts",
    "check_suffix_domination",
    "crossing_counts",
    "farthest_server_cancel",
    "interval_decomposition",
    "make_arc",
    "matching_arcs",
    "new_forward_arcs",
    "overlap_region",
    "recursive_cancel",
    "sweep",
]
