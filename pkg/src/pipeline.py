#!/usr/bin/env python

"""
Segmenter - runs the full linear colour segmentation pipeline

Steps: smoothing and colour-space homography, a RAG over single pixels,
rank-0 merging, KL isolation, two rank-1 merging passes, L/T edge locking,
rank-2 merging and the off-scale heuristic.
"""

import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from loguru import logger

from src.config.config_manager import PipelineConfig
from src.core.colour import stats_per_label
from src.engine.locks import AnyIsolatedLock, BothIsolatedLock, MarkedEdgeLock, NoLock
from src.engine.merging import StageReport, reinitialise_ssd, run_stage
from src.engine.rag import Rag, build_rag
from src.errors import InputError
from src.heuristics.isolation import mark_isolated_rank0
from src.heuristics.offscale import off_scale_merge
from src.heuristics.shape import lock_non_lt_edges
from src.preprocess.homography import build_homography, transform_image
from src.preprocess.smoothing import bilateral_filter, gaussian_smooth


@dataclass
class LabelMap:
    """Segment id per pixel, compacted to 0..K-1 in raster first-occurrence order"""

    labels: np.ndarray

    @property
    def height(self) -> int:
        return int(self.labels.shape[0])

    @property
    def width(self) -> int:
        return int(self.labels.shape[1])

    @property
    def segment_count(self) -> int:
        return int(self.labels.max()) + 1 if self.labels.size else 0

    @classmethod
    def from_ids(cls, ids: np.ndarray) -> "LabelMap":
        """Compact arbitrary integer ids"""
        flat = np.asarray(ids).reshape(-1)
        _, first, inverse = np.unique(flat, return_index=True, return_inverse=True)
        order = np.argsort(first, kind="stable")
        compact = np.empty_like(order)
        compact[order] = np.arange(len(order))
        return cls(compact[inverse.reshape(-1)].reshape(np.asarray(ids).shape).astype(np.int64))


@dataclass
class StepReport:
    """A switchable non-merging step; `detail` names the variant that ran"""

    name: str
    skipped: bool = False
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "skipped": self.skipped, "detail": self.detail}


@dataclass
class RunReport:
    """Per-stage outcome of one segmentation run"""

    width: int
    height: int
    stages: List[StageReport] = field(default_factory=list)
    steps: List[StepReport] = field(default_factory=list)
    isolated_segments: int = 0
    locked_edges: int = 0
    segment_count: int = 0
    wall_time_s: float = 0.0

    @property
    def n_pixels(self) -> int:
        return self.width * self.height

    def stage(self, name: str) -> StageReport:
        for report in self.stages:
            if report.name == name:
                return report
        raise KeyError(name)

    def step(self, name: str) -> StepReport:
        for report in self.steps:
            if report.name == name:
                return report
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "image": {"width": self.width, "height": self.height},
            "stages": [s.to_dict() for s in self.stages],
            "steps": [s.to_dict() for s in self.steps],
            "isolated_segments": self.isolated_segments,
            "locked_edges": self.locked_edges,
            "segment_count": self.segment_count,
            "wall_time_s": self.wall_time_s,
        }


@dataclass
class SegmentationResult:
    label_map: LabelMap
    report: RunReport


class Segmenter:
    """Segmenter responsible for executing the pipeline stages in order"""

    def __init__(self, config: Optional[PipelineConfig] = None):
        self.config = config or PipelineConfig()
        self.homography = build_homography(self.config.homography_params)

    def preprocess(self, image: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Smooth an 8-bit image and transform it into the working colour space

        Returns:
            (transformed, original) float images in [0, 1]-based units;
            `original` is the smoothed image before the homography
        """
        pixels = np.asarray(image)
        if pixels.ndim != 3 or pixels.shape[2] != 3 or pixels.shape[0] == 0 or pixels.shape[1] == 0:
            raise InputError(f"expected a non-empty (H, W, 3) RGB image, got shape {pixels.shape}")
        normalised = pixels.astype(np.float64) / 255.0

        config = self.config
        if config.smoothing == "bilateral":
            smoothed = bilateral_filter(normalised, config.bilateral_params)
        elif config.smoothing == "gaussian":
            smoothed = gaussian_smooth(normalised, config.gaussian_sigma)
        else:
            smoothed = normalised
        smoothed = np.clip(smoothed, 0.0, 1.0)

        if config.use_homography:
            return transform_image(self.homography, smoothed), smoothed
        return smoothed, smoothed

    def build_graph(self, transformed: np.ndarray, original: np.ndarray) -> Rag:
        """RAG with one vertex per pixel and U = 0"""
        height, width, _ = transformed.shape
        labels = np.arange(height * width, dtype=np.int64).reshape(height, width)
        return build_rag(labels, stats_per_label(labels, transformed, original))

    def segment_image(self, image: np.ndarray) -> SegmentationResult:
        """Segment an 8-bit RGB image"""
        start_time = time.time()
        config = self.config
        norm = config.normalise

        transformed, original = self.preprocess(image)
        height, width, _ = transformed.shape
        rag = self.build_graph(transformed, original)
        report = RunReport(width=width, height=height)
        report.steps += [
            StepReport("smoothing", config.smoothing == "none", config.smoothing),
            StepReport("homography", not config.use_homography, f"a={config.a:g}, b={config.b:g}"),
        ]
        logger.info(f"🎨 Segmenting {width}x{height} image ({rag.edge_count} initial edges)")

        report.stages.append(run_stage(rag, 0, norm(config.sigma0), NoLock(), "rank0"))

        report.isolated_segments = len(mark_isolated_rank0(rag, config.sigma_g).vertices)

        reinitialise_ssd(rag, 1)
        sigma1 = norm(config.sigma1)
        report.stages.append(run_stage(rag, 1, sigma1, AnyIsolatedLock(), "rank1-any-isolated"))
        report.stages.append(run_stage(rag, 1, sigma1, BothIsolatedLock(), "rank1-both-isolated"))

        # The L/T check replaces KL isolation for the planar stage
        rag.marks.clear_vertices()
        if config.use_lt_check:
            report.locked_edges = len(lock_non_lt_edges(rag, norm(config.delta_l)).edges)
        report.steps.append(
            StepReport("lt-check", not config.use_lt_check, f"{report.locked_edges} edges locked")
        )

        reinitialise_ssd(rag, 2)
        report.stages.append(run_stage(rag, 2, norm(config.sigma2), MarkedEdgeLock(), "rank2"))

        report.stages.append(self._offscale_stage(rag))

        label_map = LabelMap.from_ids(rag.pixel_roots())
        report.segment_count = label_map.segment_count
        report.wall_time_s = time.time() - start_time
        logger.success(
            f"✅ Segmentation finished: {report.segment_count} segments in {report.wall_time_s:.2f}s"
        )
        return SegmentationResult(label_map, report)

    def _offscale_stage(self, rag: Rag) -> StageReport:
        config = self.config
        merges = 0
        if config.use_offscale:
            merges = off_scale_merge(rag, config.mu_b, config.normalise(config.delta_l))
        return StageReport(
            name="offscale",
            rank=rag.rank,
            sigma=None,
            merges=merges,
            u_total=rag.u_total,
            rms=rag.rms(),
            segments=rag.segment_count,
            lock="bypass",
            skipped=not config.use_offscale,
        )


def segment_image(image: np.ndarray, config: Optional[PipelineConfig] = None) -> SegmentationResult:
    """Module-level convenience wrapper around Segmenter"""
    return Segmenter(config).segment_image(image)
