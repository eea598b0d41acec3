#!/usr/bin/env python

"""
Dataset evaluation - pairs predictions with ground truth by file stem and
scores them concurrently

Ground truth layout: `<stem>.png` 16-bit label map (0 = unannotated) and
optional shadow masks `<stem>.shadow.<N>.png` (0/255).
"""

import asyncio
import itertools
import re
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple

from loguru import logger

from src.config.config_manager import PipelineConfig, build_pipeline_config
from src.errors import ColourSegError, InputError
from src.evaluation.metrics import (
    GroundTruth,
    MatchResult,
    dataset_miou,
    literal_dataset_miou,
    match_shadow_first,
)
from src.pipeline import Segmenter
from src.raster import read_label_map, read_mask, read_rgb

IMAGE_SUFFIXES = (".png", ".ppm")
_SHADOW_RE = re.compile(r"^(?P<stem>.+)\.shadow\.(?P<index>\d+)\.png$")

METRIC_NOTE = (
    "miou = (1/K) * sum 2*min(IoU, 0.5) over all ground-truth segments and shadow masks; "
    "literal_sum = sum min(IoU, 0.5) over matches"
)


def _stems(directory: Path, suffixes: Iterable[str]) -> Dict[str, Path]:
    if not directory.is_dir():
        raise InputError(f"not a directory: {directory}")
    found: Dict[str, Path] = {}
    for path in sorted(directory.iterdir()):
        if path.suffix.lower() in suffixes and ".shadow." not in path.name:
            found.setdefault(path.stem, path)
    return found


def load_ground_truth(gt_dir: Path, stem: str) -> GroundTruth:
    """Read `<stem>.png` and its shadow masks, ordered by mask index"""
    labels = read_label_map(gt_dir / f"{stem}.png")
    shadows: List[Tuple[int, Path]] = []
    for path in gt_dir.glob(f"{stem}.shadow.*.png"):
        match = _SHADOW_RE.match(path.name)
        if match and match.group("stem") == stem:
            shadows.append((int(match.group("index")), path))
    masks = [read_mask(path) for _, path in sorted(shadows)]
    return GroundTruth(labels=labels, shadow_masks=masks)


def pair_stems(pred: Dict[str, Path], gt: Dict[str, Path]) -> Tuple[List[str], List[str]]:
    """Common stems and stems present on only one side"""
    common = sorted(pred.keys() & gt.keys())
    unmatched = sorted(pred.keys() ^ gt.keys())
    for stem in unmatched:
        side = "predictions" if stem in pred else "ground truth"
        logger.warning(f"⚠️ Skipping {stem}: only present in {side}")
    return common, unmatched


@dataclass
class EvaluationReport:
    """Per-image match tables plus the dataset aggregate"""

    images: Dict[str, MatchResult] = field(default_factory=dict)
    skipped: List[str] = field(default_factory=list)
    failed: Dict[str, str] = field(default_factory=dict)
    wall_time_s: float = 0.0

    @property
    def miou(self) -> float:
        return dataset_miou(list(self.images.values()))

    @property
    def literal_sum(self) -> float:
        return literal_dataset_miou(list(self.images.values()))

    @property
    def gt_segments(self) -> int:
        return sum(r.gt_total for r in self.images.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dataset": {
                "miou": self.miou,
                "literal_sum": self.literal_sum,
                "gt_segments": self.gt_segments,
                "images": len(self.images),
                "shadow_matches": sum(
                    1 for r in self.images.values() for p in r.pairs if p.shadow
                ),
                "metric": METRIC_NOTE,
            },
            "images": {stem: result.to_dict() for stem, result in sorted(self.images.items())},
            "skipped": self.skipped,
            "failed": self.failed,
            "wall_time_s": self.wall_time_s,
        }


async def _gather_limited(jobs: Dict[str, Any], threads: int) -> Dict[str, Any]:
    """Run blocking callables in worker threads, at most `threads` at a time"""
    semaphore = asyncio.Semaphore(max(1, threads))

    async def run(stem: str, job) -> Tuple[str, Any]:
        async with semaphore:
            try:
                return stem, await asyncio.to_thread(job)
            except ColourSegError as e:
                logger.warning(f"⚠️ {stem}: {e}")
                return stem, e

    pairs = await asyncio.gather(*(run(stem, job) for stem, job in jobs.items()))
    return dict(pairs)


def _collect(report: EvaluationReport, outcomes: Dict[str, Any]) -> EvaluationReport:
    for stem, outcome in sorted(outcomes.items()):
        if isinstance(outcome, ColourSegError):
            report.failed[stem] = str(outcome)
        else:
            report.images[stem] = outcome
    if not report.images:
        raise InputError("no evaluable prediction / ground-truth pairs")
    return report


async def evaluate_directory(pred_dir: Path, gt_dir: Path, threads: int = 1) -> EvaluationReport:
    """Score every `<stem>.png` label map in pred_dir against gt_dir"""
    start_time = time.time()
    pred_dir, gt_dir = Path(pred_dir), Path(gt_dir)
    common, unmatched = pair_stems(_stems(pred_dir, (".png",)), _stems(gt_dir, (".png",)))

    def score(stem: str):
        return lambda: match_shadow_first(
            load_ground_truth(gt_dir, stem), read_label_map(pred_dir / f"{stem}.png")
        )

    logger.info(f"📊 Evaluating {len(common)} images with {threads} threads")
    report = _collect(
        EvaluationReport(skipped=unmatched),
        await _gather_limited({stem: score(stem) for stem in common}, threads),
    )
    report.wall_time_s = time.time() - start_time
    logger.success(f"✅ Dataset mIoU {report.miou:.4f} over {report.gt_segments} ground-truth segments")
    return report


async def evaluate_segmenter(
    image_dir: Path,
    gt_dir: Path,
    config: PipelineConfig,
    threads: int = 1,
    ground_truth: Optional[Dict[str, GroundTruth]] = None,
) -> EvaluationReport:
    """Segment every image in image_dir with `config` and score against gt_dir"""
    start_time = time.time()
    image_dir, gt_dir = Path(image_dir), Path(gt_dir)
    common, unmatched = pair_stems(_stems(image_dir, IMAGE_SUFFIXES), _stems(gt_dir, (".png",)))
    images = _stems(image_dir, IMAGE_SUFFIXES)
    segmenter = Segmenter(config)
    cache = ground_truth if ground_truth is not None else {}

    def score(stem: str):
        def job() -> MatchResult:
            gt = cache.get(stem) or load_ground_truth(gt_dir, stem)
            labels = segmenter.segment_image(read_rgb(images[stem])).label_map.labels
            return match_shadow_first(gt, labels)

        return job

    report = _collect(
        EvaluationReport(skipped=unmatched),
        await _gather_limited({stem: score(stem) for stem in common}, threads),
    )
    report.wall_time_s = time.time() - start_time
    return report


@dataclass
class SweepReport:
    """Dataset mIoU for every parameter combination of a grid"""

    rows: List[Tuple[Dict[str, float], EvaluationReport]] = field(default_factory=list)

    @property
    def best(self) -> Tuple[Dict[str, float], EvaluationReport]:
        # first maximum in grid order
        return max(self.rows, key=lambda row: row[1].miou)

    def to_dict(self) -> Dict[str, Any]:
        params, best = self.best
        return {
            "grid": [
                {"params": p, "miou": r.miou, "literal_sum": r.literal_sum, "images": len(r.images)}
                for p, r in self.rows
            ],
            "best": {"params": params, "miou": best.miou},
            "metric": METRIC_NOTE,
        }


def expand_grid(grid: Dict[str, List[float]]) -> List[Dict[str, float]]:
    """Cartesian product of per-parameter value lists, in key order"""
    keys = list(grid)
    return [dict(zip(keys, values)) for values in itertools.product(*(grid[k] for k in keys))]


async def sweep_parameters(
    image_dir: Path,
    gt_dir: Path,
    base: PipelineConfig,
    grid: Dict[str, List[float]],
    threads: int = 1,
) -> SweepReport:
    """Evaluate the segmenter for every combination of `grid` applied on top of `base`"""
    combos = expand_grid(grid)
    if not combos:
        raise InputError("empty parameter grid")
    gt_dir = Path(gt_dir)
    stems = sorted(_stems(gt_dir, (".png",)))
    ground_truth = {stem: load_ground_truth(gt_dir, stem) for stem in stems}

    report = SweepReport()
    for params in combos:
        config = build_pipeline_config({**base.model_dump(), **params})
        logger.info(f"🔍 Sweep {params}")
        result = await evaluate_segmenter(image_dir, gt_dir, config, threads, ground_truth)
        report.rows.append((params, result))
    params, best = report.best
    logger.success(f"✅ Best of {len(combos)} combinations: {params} (mIoU {best.miou:.4f})")
    return report
