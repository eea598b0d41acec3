"""Segmentation evaluation: IoU, shadow-aware matching and dataset mIoU."""

from .dataset import (
    EvaluationReport,
    SweepReport,
    evaluate_directory,
    evaluate_segmenter,
    expand_grid,
    load_ground_truth,
    sweep_parameters,
)
from .metrics import (
    GroundTruth,
    MatchPair,
    MatchResult,
    dataset_miou,
    iou,
    literal_dataset_miou,
    match_shadow_first,
)

__all__ = [
    "EvaluationReport",
    "GroundTruth",
    "MatchPair",
    "MatchResult",
    "SweepReport",
    "dataset_miou",
    "evaluate_directory",
    "evaluate_segmenter",
    "expand_grid",
    "iou",
    "literal_dataset_miou",
    "load_ground_truth",
    "match_shadow_first",
    "sweep_parameters",
]
