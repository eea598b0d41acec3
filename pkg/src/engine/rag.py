#!/usr/bin/env python

"""
Region adjacency graph over an image label map
"""

from typing import Dict, Iterator, List, Set, Tuple

import numpy as np
from loguru import logger

from src.core.colour import RegionStats, merge_stats, rank_ssd
from src.engine.locks import Edge, IsolationMarks, edge_key
from src.errors import InputError


class UnionFind:
    """Disjoint sets over pixel-level label ids; the root is always the smallest id"""

    def __init__(self, size: int):
        self._parents: List[int] = list(range(size))

    def __len__(self) -> int:
        return len(self._parents)

    def find(self, index: int) -> int:
        parents = self._parents
        root = index
        while parents[root] != root:
            root = parents[root]
        while parents[index] != root:
            parents[index], index = root, parents[index]
        return root

    def union(self, keep: int, gone: int):
        """Attach the set of `gone` under the root of `keep`"""
        root_keep = self.find(keep)
        root_gone = self.find(gone)
        if root_keep != root_gone:
            self._parents[root_gone] = root_keep

    def roots(self, ids: np.ndarray) -> np.ndarray:
        """Vectorised find over an array of ids"""
        parents = np.asarray(self._parents, dtype=np.int64)
        while True:
            grand = parents[parents]
            if np.array_equal(grand, parents):
                break
            parents = grand
        return parents[np.asarray(ids, dtype=np.int64)]


class Rag:
    """Region adjacency graph with per-segment statistics and running SSD

    Vertices are alive segment ids (keys of `stats`); merged-away ids stay
    reachable through the union-find. `ssd` caches rank_ssd of every alive
    segment at the current `rank`, and `u_total` is their sum.
    """

    def __init__(self, label_image: np.ndarray, stats: Dict[int, RegionStats], edges: Set[Edge]):
        self.label_image = label_image
        self.shape: Tuple[int, int] = (int(label_image.shape[0]), int(label_image.shape[1]))
        self.n_pixels = int(label_image.size)

        self.stats: Dict[int, RegionStats] = dict(stats)
        self.neighbours: Dict[int, Set[int]] = {v: set() for v in self.stats}
        for u, v in edges:
            self.neighbours[u].add(v)
            self.neighbours[v].add(u)

        self.labels = UnionFind(int(label_image.max()) + 1 if label_image.size else 0)
        self.versions: Dict[int, int] = {v: 0 for v in self.stats}
        self.marks = IsolationMarks()

        self.rank = 0
        self.ssd: Dict[int, float] = {v: rank_ssd(st, 0) for v, st in self.stats.items()}
        self.u_total = float(sum(self.ssd.values()))

    @property
    def segment_count(self) -> int:
        return len(self.stats)

    @property
    def edge_count(self) -> int:
        return sum(len(n) for n in self.neighbours.values()) // 2

    def is_alive(self, v: int) -> bool:
        return v in self.stats

    def edges(self) -> Iterator[Edge]:
        """Alive edges as (smaller id, larger id), in ascending order"""
        for u in sorted(self.neighbours):
            for v in sorted(self.neighbours[u]):
                if u < v:
                    yield u, v

    def rms(self) -> float:
        """sqrt(U / N)"""
        return float(np.sqrt(max(self.u_total, 0.0) / self.n_pixels)) if self.n_pixels else 0.0

    def recompute_u(self, rank: int) -> float:
        """From-scratch sum of rank_ssd over alive segments"""
        return float(sum(rank_ssd(st, rank) for st in self.stats.values()))

    def merge(self, u: int, v: int, cost: float) -> int:
        """Merge two adjacent segments; the smaller id survives

        Args:
            u, v: alive, adjacent segment ids
            cost: SSD increase of the merge, added to u_total

        Returns:
            Surviving segment id
        """
        keep, gone = (u, v) if u < v else (v, u)
        merged = merge_stats(self.stats[keep], self.stats.pop(gone))
        self.stats[keep] = merged

        gone_neighbours = self.neighbours.pop(gone)
        gone_neighbours.discard(keep)
        keep_neighbours = self.neighbours[keep]
        keep_neighbours.discard(gone)

        marks = self.marks
        if marks.edges:
            marks.edges.discard(edge_key(keep, gone))
            for w in gone_neighbours:
                old = edge_key(gone, w)
                if old in marks.edges:
                    marks.edges.discard(old)
                    marks.edges.add(edge_key(keep, w))
        if gone in marks.vertices:
            marks.vertices.discard(gone)
            marks.vertices.add(keep)

        for w in gone_neighbours:
            w_neighbours = self.neighbours[w]
            w_neighbours.discard(gone)
            w_neighbours.add(keep)
            keep_neighbours.add(w)

        self.labels.union(keep, gone)
        self.versions[keep] += 1
        del self.versions[gone]

        del self.ssd[gone]
        self.ssd[keep] = rank_ssd(merged, self.rank)
        self.u_total += cost
        return keep

    def pixel_roots(self) -> np.ndarray:
        """Current segment id of every pixel, shaped like the image"""
        return self.labels.roots(self.label_image.reshape(-1)).reshape(self.shape)


def build_rag(label_image: np.ndarray, stats: Dict[int, RegionStats]) -> Rag:
    """Build a 4-connected RAG from a label image and per-label statistics"""
    labels = np.asarray(label_image, dtype=np.int64)
    if labels.ndim != 2 or labels.size == 0:
        raise InputError(f"label image must be a non-empty 2-D grid, got shape {labels.shape}")
    present = np.unique(labels)
    missing = [int(label) for label in present if int(label) not in stats]
    if missing:
        raise InputError(f"no statistics for labels {missing[:5]}")

    left, right = labels[:, :-1].reshape(-1), labels[:, 1:].reshape(-1)
    top, bottom = labels[:-1, :].reshape(-1), labels[1:, :].reshape(-1)
    a = np.concatenate([left, top])
    b = np.concatenate([right, bottom])
    distinct = a != b
    pairs = np.stack([np.minimum(a, b)[distinct], np.maximum(a, b)[distinct]], axis=1)
    if len(pairs):
        pairs = np.unique(pairs, axis=0)
    edges = {(int(u), int(v)) for u, v in pairs}

    used = {int(label): stats[int(label)] for label in present}
    rag = Rag(labels, used, edges)
    logger.debug(f"RAG built: {rag.segment_count} vertices, {len(edges)} edges")
    return rag
