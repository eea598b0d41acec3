#!/usr/bin/env python

"""
Absorption of off-scale (overexposed) regions

Clipped pixels fall off the dichromatic plane of their object, so planar
merging leaves them as separate regions. A region whose mean original
brightness exceeds mu_B is merged into its only neighbour, or joins two of
its neighbours that are not adjacent to each other but form an L or T
shaped cluster pair.
"""

from itertools import combinations
from typing import List, Optional, Tuple

from loguru import logger

from src.engine.merging import force_merge
from src.engine.rag import Rag
from src.heuristics.shape import line_model, lt_shape_test


def _offscale_regions(rag: Rag, threshold: float) -> List[int]:
    """Alive off-scale regions, brightest first, ties by id"""
    bright = [(st.brightness, v) for v, st in rag.stats.items() if st.brightness > threshold]
    bright.sort(key=lambda item: (-item[0], item[1]))
    return [v for _, v in bright]


def _find_rule(rag: Rag, region: int, delta_l: float) -> Optional[Tuple[int, ...]]:
    neighbours = sorted(rag.neighbours[region])
    if len(neighbours) == 1:
        return (neighbours[0],)
    models = {}
    for p, q in combinations(neighbours, 2):
        if q in rag.neighbours[p]:
            continue
        for v in (p, q):
            if v not in models:
                models[v] = line_model(rag.stats[v])
        if lt_shape_test(models[p], models[q], delta_l):
            return (p, q)
    return None


def off_scale_merge(rag: Rag, mu_b: float, delta_l: float) -> int:
    """Apply the off-scale rules until none fires

    Args:
        rag: graph after the rank-2 stage
        mu_b: brightness threshold in original 0-255 units
        delta_l: L/T distance threshold in the colour units of the statistics

    Returns:
        Number of pairwise merges performed
    """
    threshold = mu_b / 255.0
    merges = 0
    changed = True
    while changed:
        changed = False
        for region in _offscale_regions(rag, threshold):
            partners = _find_rule(rag, region, delta_l)
            if partners is None:
                continue
            keep = region
            for partner in partners:
                keep = force_merge(rag, keep, partner)
                merges += 1
            logger.debug(f"Off-scale region {region} absorbed with {list(partners)}")
            changed = True
            break

    if merges:
        logger.info(f"📊 Off-scale heuristic performed {merges} merges")
    return merges
