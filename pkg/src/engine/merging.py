#!/usr/bin/env python

"""
Greedy region merging on the RAG

Each stage repeatedly merges the cheapest mergeable edge, where the cost is
the increase of U (the sum of least-squares deviations of all segments from
their rank-r models). A stage ends when the next merge would push
sqrt(U / N) above the stage threshold; that merge is not committed.
"""

import heapq
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Tuple

from loguru import logger

from src.core.colour import RegionStats, merge_stats, rank_ssd
from src.engine.locks import EdgeLock
from src.engine.rag import Rag

# Floating-point jitter can make a merge cost marginally negative
NEGATIVE_COST_TOLERANCE = 1e-9

HeapEntry = Tuple[float, int, int, int, int]


@dataclass
class StageReport:
    """Outcome of one merge stage"""

    name: str
    rank: int
    sigma: Optional[float]
    merges: int
    u_total: float
    rms: float
    segments: int
    lock: str = "none"
    skipped: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _clamp_cost(cost: float, scale: float) -> float:
    if cost >= 0.0:
        return cost
    if cost < -NEGATIVE_COST_TOLERANCE * max(1.0, scale):
        logger.warning(f"⚠️ Merge cost {cost:.3e} below jitter level, clamped to 0")
    return 0.0


def merge_cost(a: RegionStats, b: RegionStats, rank: int) -> float:
    """Increase of the rank-r SSD caused by merging two segments"""
    joint = rank_ssd(merge_stats(a, b), rank)
    return _clamp_cost(joint - rank_ssd(a, rank) - rank_ssd(b, rank), joint)


def _edge_cost(rag: Rag, u: int, v: int) -> float:
    joint = rank_ssd(merge_stats(rag.stats[u], rag.stats[v]), rag.rank)
    return _clamp_cost(joint - rag.ssd[u] - rag.ssd[v], joint)


def reinitialise_ssd(rag: Rag, rank: int) -> float:
    """Switch the RAG to rank-r models and recompute U from the statistics"""
    rag.rank = rank
    rag.ssd = {v: rank_ssd(st, rank) for v, st in rag.stats.items()}
    rag.u_total = float(sum(rag.ssd.values()))
    logger.debug(f"SSD reinitialised at rank {rank}: U={rag.u_total:.6g}")
    return rag.u_total


def force_merge(rag: Rag, u: int, v: int) -> int:
    """Merge two adjacent segments regardless of thresholds and locks"""
    return rag.merge(u, v, _edge_cost(rag, u, v))


def _push(rag: Rag, heap: List[HeapEntry], u: int, v: int):
    lo, hi = (u, v) if u < v else (v, u)
    heapq.heappush(heap, (_edge_cost(rag, lo, hi), lo, hi, rag.versions[lo], rag.versions[hi]))


def run_stage(rag: Rag, rank: int, sigma: float, lock: EdgeLock, name: str = "") -> StageReport:
    """Greedy merging at one rank until the sqrt(U/N) budget `sigma` is reached

    Args:
        rag: graph to mutate; not re-entrant
        rank: model rank 0, 1 or 2
        sigma: threshold on sqrt(U / N), in the colour units of the statistics
        lock: predicate excluding edges from this stage
        name: label for the report

    Returns:
        StageReport with the merge count and the final U
    """
    if rag.rank != rank:
        reinitialise_ssd(rag, rank)

    marks = rag.marks
    heap: List[HeapEntry] = []
    for u, v in rag.edges():
        if not lock.is_locked(marks, u, v):
            heap.append((_edge_cost(rag, u, v), u, v, rag.versions[u], rag.versions[v]))
    heapq.heapify(heap)

    n_pixels = rag.n_pixels
    stats = rag.stats
    versions = rag.versions
    merges = 0
    while heap:
        cost, u, v, version_u, version_v = heapq.heappop(heap)
        if u not in stats or v not in stats:
            continue
        if versions[u] != version_u or versions[v] != version_v:
            continue
        if lock.is_locked(marks, u, v):
            continue
        if math.sqrt((rag.u_total + cost) / n_pixels) > sigma:
            break

        keep = rag.merge(u, v, cost)
        merges += 1
        for w in rag.neighbours[keep]:
            if not lock.is_locked(marks, keep, w):
                _push(rag, heap, keep, w)

    report = StageReport(
        name=name or f"rank{rank}",
        rank=rank,
        sigma=sigma,
        merges=merges,
        u_total=rag.u_total,
        rms=rag.rms(),
        segments=rag.segment_count,
        lock=lock.name,
    )
    logger.info(
        f"🔍 Stage {report.name}: {merges} merges, {report.segments} segments, "
        f"sqrt(U/N)={report.rms:.5f} (threshold {sigma:.5f})"
    )
    return report
