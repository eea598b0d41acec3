#!/usr/bin/env python

"""
Kullback-Leibler isolation of rank-0 segments
"""

from typing import Dict, Tuple

import numpy as np
from loguru import logger

from src.core.colour import RegionStats
from src.engine.locks import Edge, IsolationMarks, edge_key
from src.engine.rag import Rag

# One 8-bit quantisation step, squared, in normalised colour units
RIDGE = (1.0 / 255.0) ** 2


def _gaussian(st: RegionStats, ridge: float) -> Tuple[np.ndarray, np.ndarray]:
    covariance = st.scatter() / st.n + ridge * np.eye(3)
    return st.mean, covariance


def gaussian_kl(a: RegionStats, b: RegionStats, ridge: float = RIDGE) -> float:
    """Symmetrised KL divergence 1/2 [KL(a||b) + KL(b||a)] between fitted Gaussians

    Each segment is modelled as N(mean, S/n + ridge I). The log-determinant
    terms cancel in the symmetrised form.
    """
    mu_a, cov_a = _gaussian(a, ridge)
    mu_b, cov_b = _gaussian(b, ridge)
    inv_a = np.linalg.inv(cov_a)
    inv_b = np.linalg.inv(cov_b)
    delta = mu_b - mu_a
    value = 0.25 * (
        np.trace(inv_b @ cov_a)
        + np.trace(inv_a @ cov_b)
        - 6.0
        + float(delta @ (inv_a + inv_b) @ delta)
    )
    return max(float(value), 0.0)


def mark_isolated_rank0(rag: Rag, sigma_g: float, ridge: float = RIDGE) -> IsolationMarks:
    """Isolate segments whose closest neighbour (by gaussian_kl) is farther than sigma_g

    Segments without neighbours are isolated. Existing edge locks are kept.
    """
    divergences: Dict[Edge, float] = {}
    isolated = set()
    for v in sorted(rag.stats):
        d_min = float("inf")
        for w in rag.neighbours[v]:
            key = edge_key(v, w)
            if key not in divergences:
                divergences[key] = gaussian_kl(rag.stats[key[0]], rag.stats[key[1]], ridge)
            d_min = min(d_min, divergences[key])
        if d_min > sigma_g:
            isolated.add(v)

    rag.marks.vertices = isolated
    logger.info(f"📊 Isolated {len(isolated)} of {rag.segment_count} rank-0 segments (sigma_G={sigma_g})")
    return rag.marks
