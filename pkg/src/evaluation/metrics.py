#!/usr/bin/env python

"""
Segmentation quality metrics

Output segments are matched one-to-one to ground-truth segments at
IoU >= 0.5, shadow masks first. The dataset score averages 2 * min(IoU, 0.5)
over all ground-truth segments (unmatched ones count as 0), so a perfect
segmentation scores 1.
"""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterable, List, Tuple

import numpy as np

from src.errors import DomainError, InputError

UNANNOTATED = 0
MATCH_IOU = 0.5


@dataclass
class GroundTruth:
    """Annotated label image (0 = unannotated) plus possibly overlapping shadow masks"""

    labels: np.ndarray
    shadow_masks: List[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.int64)
        masks = [np.asarray(mask, dtype=bool) for mask in self.shadow_masks]
        for k, mask in enumerate(masks):
            if mask.shape != self.labels.shape:
                raise InputError(
                    f"shadow mask {k} has shape {mask.shape}, labels have {self.labels.shape}"
                )
        self.shadow_masks = masks

    @property
    def segment_ids(self) -> List[int]:
        return [int(v) for v in np.unique(self.labels) if v != UNANNOTATED]

    def scored_pixels(self) -> np.ndarray:
        """Pixels taking part in scoring: annotated or inside some shadow mask"""
        scored = self.labels != UNANNOTATED
        for mask in self.shadow_masks:
            scored |= mask
        return scored


@dataclass
class MatchPair:
    gt_id: int
    out_id: int
    iou: float
    shadow: bool = False


@dataclass
class MatchResult:
    """One-to-one matches of one image"""

    pairs: List[MatchPair]
    gt_total: int
    unmatched_segments: List[int]
    unmatched_shadows: List[int]

    @property
    def capped_sum(self) -> float:
        """Sum of min(IoU, 0.5) over matches (the literal per-image sum)"""
        return float(sum(min(p.iou, MATCH_IOU) for p in self.pairs))

    @property
    def score(self) -> float:
        """Per-image normalised mIoU in [0, 1]"""
        if self.gt_total == 0:
            return 0.0
        return 2.0 * self.capped_sum / self.gt_total

    def to_dict(self) -> Dict[str, Any]:
        return {
            "miou": self.score,
            "literal_sum": self.capped_sum,
            "gt_segments": self.gt_total,
            "shadow_matches": sum(1 for p in self.pairs if p.shadow),
            "matches": [asdict(p) for p in self.pairs],
            "unmatched_segments": self.unmatched_segments,
            "unmatched_shadows": self.unmatched_shadows,
        }


def iou(s_star: np.ndarray, s_tilde: np.ndarray) -> float:
    """Jaccard index of two pixel sets given as boolean masks"""
    a = np.asarray(s_star, dtype=bool)
    b = np.asarray(s_tilde, dtype=bool)
    if a.shape != b.shape:
        raise InputError(f"pixel sets from different domains: {a.shape} vs {b.shape}")
    union = int(np.count_nonzero(a | b))
    if union == 0:
        raise DomainError("IoU of two empty sets is undefined")
    return int(np.count_nonzero(a & b)) / union


def _one_to_one(candidates: Iterable[Tuple[float, int, int]]) -> List[Tuple[float, int, int]]:
    """Greedy injective matching over (iou, gt, out), best IoU first"""
    chosen = []
    used_gt, used_out = set(), set()
    for value, gt_id, out_id in sorted(candidates, key=lambda c: (-c[0], c[1], c[2])):
        if gt_id in used_gt or out_id in used_out:
            continue
        used_gt.add(gt_id)
        used_out.add(out_id)
        chosen.append((value, gt_id, out_id))
    return chosen


def match_shadow_first(gt: GroundTruth, out: np.ndarray) -> MatchResult:
    """Match output segments to shadow masks, then to the remaining ground truth

    Args:
        gt: ground truth of the image
        out: (H, W) output label map (any non-negative ids)
    """
    out_labels = np.asarray(out, dtype=np.int64)
    if out_labels.shape != gt.labels.shape:
        raise InputError(f"label map {out_labels.shape} does not match ground truth {gt.labels.shape}")

    scored = gt.scored_pixels()
    out_ids, out_sizes = np.unique(out_labels[scored], return_counts=True)
    order = sorted(zip(out_ids.tolist(), out_sizes.tolist()), key=lambda item: (-item[1], item[0]))

    pairs: List[MatchPair] = []
    matched_out = set()
    open_shadows = set(range(len(gt.shadow_masks)))
    excluded = np.zeros_like(scored)

    if gt.shadow_masks:
        for out_id, _ in order:
            if not open_shadows:
                break
            segment = (out_labels == out_id) & scored
            best_k, best_iou = -1, -1.0
            for k in sorted(open_shadows):
                value = iou(gt.shadow_masks[k], segment)
                if value > best_iou:
                    best_k, best_iou = k, value
            if best_iou >= MATCH_IOU:
                pairs.append(MatchPair(best_k, out_id, best_iou, shadow=True))
                matched_out.add(out_id)
                open_shadows.discard(best_k)
                excluded |= gt.shadow_masks[best_k]

    domain = scored & ~excluded
    gt_flat = gt.labels[domain]
    out_flat = out_labels[domain]
    gt_ids, gt_sizes = np.unique(gt_flat[gt_flat != UNANNOTATED], return_counts=True)
    gt_size = dict(zip(gt_ids.tolist(), gt_sizes.tolist()))
    ids, sizes = np.unique(out_flat, return_counts=True)
    out_size = dict(zip(ids.tolist(), sizes.tolist()))

    annotated = gt_flat != UNANNOTATED
    joint, counts = np.unique(
        np.stack([gt_flat[annotated], out_flat[annotated]], axis=1), axis=0, return_counts=True
    ) if np.any(annotated) else (np.zeros((0, 2), dtype=np.int64), np.zeros(0, dtype=np.int64))

    candidates = []
    for (gt_id, out_id), inter in zip(joint.tolist(), counts.tolist()):
        if out_id in matched_out:
            continue
        value = inter / (gt_size[gt_id] + out_size[out_id] - inter)
        if value >= MATCH_IOU:
            candidates.append((value, gt_id, out_id))
    for value, gt_id, out_id in _one_to_one(candidates):
        pairs.append(MatchPair(gt_id, out_id, value))

    matched_gt = {p.gt_id for p in pairs if not p.shadow}
    return MatchResult(
        pairs=pairs,
        gt_total=len(gt.segment_ids) + len(gt.shadow_masks),
        unmatched_segments=[g for g in gt.segment_ids if g not in matched_gt],
        unmatched_shadows=sorted(open_shadows),
    )


def dataset_miou(results: List[MatchResult]) -> float:
    """Normalised dataset mIoU: (1/K) * sum_k 2 min(IoU_k, 0.5) over all ground-truth segments"""
    total = sum(r.gt_total for r in results)
    if total == 0:
        raise DomainError("dataset has no ground-truth segments")
    return 2.0 * sum(r.capped_sum for r in results) / total


def literal_dataset_miou(results: List[MatchResult]) -> float:
    """The unnormalised sum of min(IoU, 0.5) over all matches"""
    return float(sum(r.capped_sum for r in results))
