"""Hierarchically well-separated trees and their random sampling.

The dynamic general-metric run lives in `rematch.hst.dynamic`, imported on demand.
"""

from rematch.hst.frt import SLACK, frt_sample, tree_depth
from rematch.hst.tree import Hst, HstNode, NodeId, format_hst, parse_hst, read_hst, write_hst

__all__ = [
    "SLACK",
    "Hst",
    "HstNode",
    "NodeId",
    "format_hst",
    "frt_sample",
    "parse_hst",
    "read_hst",
    "tree_depth",
    "write_hst",
]
