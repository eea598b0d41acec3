#!/usr/bin/env python

"""
L- and T-shape test for pairs of colour clusters

Each cluster is reduced to a line segment along the major axis of its
dispersion ellipsoid. Two clusters form an L or T when an end of one
segment lies within delta_L of the other segment.
"""

import math
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np
from loguru import logger

from src.core.colour import ColourVec, RegionStats, spectrum
from src.engine.locks import IsolationMarks
from src.engine.rag import Rag


@dataclass(frozen=True, eq=False)
class SegmentLineModel:
    """Centre, unit direction and half length of a cluster's major axis"""

    center: ColourVec
    direction: np.ndarray
    half_length: float

    @property
    def endpoints(self) -> Tuple[ColourVec, ColourVec]:
        offset = self.half_length * self.direction
        return self.center - offset, self.center + offset


def line_model(st: RegionStats) -> SegmentLineModel:
    """Major axis of the scatter ellipsoid; half length = sqrt(lambda_1)

    lambda_1 is the leading eigenvalue of the scatter matrix, so the model
    grows with sqrt(n) for a fixed spread.
    """
    sp = spectrum(st)
    return SegmentLineModel(
        center=sp.mean,
        direction=sp.eigenvectors[:, 0].copy(),
        half_length=math.sqrt(float(sp.eigenvalues[0])),
    )


def point_segment_distance(p: ColourVec, a: ColourVec, b: ColourVec) -> float:
    """Euclidean distance from p to the closed segment [a, b]"""
    ab = b - a
    length_sq = float(ab @ ab)
    if length_sq == 0.0:
        return float(np.linalg.norm(p - a))
    t = min(1.0, max(0.0, float((p - a) @ ab) / length_sq))
    return float(np.linalg.norm(p - (a + t * ab)))


def lt_shape_test(a: SegmentLineModel, b: SegmentLineModel, delta_l: float) -> bool:
    """True iff some endpoint of either model is closer than delta_l to the other model"""
    a0, a1 = a.endpoints
    b0, b1 = b.endpoints
    return (
        point_segment_distance(a0, b0, b1) < delta_l
        or point_segment_distance(a1, b0, b1) < delta_l
        or point_segment_distance(b0, a0, a1) < delta_l
        or point_segment_distance(b1, a0, a1) < delta_l
    )


def lock_non_lt_edges(rag: Rag, delta_l: float) -> IsolationMarks:
    """Lock every edge whose endpoint clusters do not form an L or T shape

    Vertex isolation flags are left as they are.
    """
    models: Dict[int, SegmentLineModel] = {v: line_model(st) for v, st in rag.stats.items()}
    locked = {(u, v) for u, v in rag.edges() if not lt_shape_test(models[u], models[v], delta_l)}
    rag.marks.edges = locked
    logger.info(f"📊 L/T check locked {len(locked)} of {rag.edge_count} edges (delta_L={delta_l:.5f})")
    return rag.marks
