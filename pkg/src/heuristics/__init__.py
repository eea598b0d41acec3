"""Model-guided gates around the merge stages."""

from src.engine.locks import IsolationMarks
from src.heuristics.isolation import RIDGE, gaussian_kl, mark_isolated_rank0
from src.heuristics.offscale import off_scale_merge
from src.heuristics.shape import (
    SegmentLineModel,
    line_model,
    lock_non_lt_edges,
    lt_shape_test,
    point_segment_distance,
)

__all__ = [
    "IsolationMarks",
    "RIDGE",
    "gaussian_kl",
    "mark_isolated_rank0",
    "off_scale_merge",
    "SegmentLineModel",
    "line_model",
    "lock_non_lt_edges",
    "lt_shape_test",
    "point_segment_distance",
]
