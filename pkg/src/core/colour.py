#!/usr/bin/env python

"""
Colour-space points and additive segment statistics

A segment is summarised by its pixel count, first and second moments of its
colours, and the summed brightness of the same pixels before the colour-space
homography. Everything the merge costs need follows from these in O(1).
"""

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np
import numpy.typing as npt

from src.core.eigen import clamp_eigenvalues, symmetric_eigenvalues, symmetric_eigh
from src.errors import DomainError, InputError

# A colour point (r, g, b); also used for (k, 3) arrays of points
ColourVec = npt.NDArray[np.float64]

RANKS = (0, 1, 2)


@dataclass(frozen=True, eq=False)
class RegionStats:
    """Additive sufficient statistics of a segment"""

    n: int
    s: np.ndarray
    m: np.ndarray
    bsum: float

    def __post_init__(self):
        self.s.setflags(write=False)
        self.m.setflags(write=False)

    @classmethod
    def zero(cls) -> "RegionStats":
        return cls(0, np.zeros(3), np.zeros((3, 3)), 0.0)

    def __add__(self, other: "RegionStats") -> "RegionStats":
        return merge_stats(self, other)

    @property
    def mean(self) -> ColourVec:
        _require_pixels(self)
        return self.s / self.n

    @property
    def brightness(self) -> float:
        """Mean original-space brightness (R+G+B)/3"""
        _require_pixels(self)
        return self.bsum / self.n

    def scatter(self) -> np.ndarray:
        """S = m - s s^T / n"""
        _require_pixels(self)
        return self.m - np.outer(self.s, self.s) / self.n


@dataclass(frozen=True, eq=False)
class ScatterSpectrum:
    """Eigenstructure of a segment's scatter matrix (the dispersion ellipsoid)"""

    eigenvalues: np.ndarray  # descending, clamped at 0
    eigenvectors: np.ndarray  # columns e1, e2, e3
    mean: ColourVec


def _require_pixels(st: RegionStats):
    if st.n < 1:
        raise DomainError("statistics of an empty segment are undefined")


def _as_points(pixels) -> np.ndarray:
    points = np.asarray(pixels, dtype=np.float64)
    if points.size == 0:
        return np.zeros((0, 3))
    return points.reshape(-1, 3)


def stats_from_pixels(pixels, original_pixels) -> RegionStats:
    """Accumulate statistics over transformed pixels and their originals"""
    points = _as_points(pixels)
    originals = _as_points(original_pixels)
    if len(points) != len(originals):
        raise InputError(
            f"pixel count mismatch: {len(points)} transformed vs {len(originals)} original"
        )
    if len(points) == 0:
        return RegionStats.zero()
    return RegionStats(
        n=len(points),
        s=points.sum(axis=0),
        m=points.T @ points,
        bsum=float(originals.sum() / 3.0),
    )


def merge_stats(a: RegionStats, b: RegionStats) -> RegionStats:
    """Statistics of the union of two disjoint segments"""
    return RegionStats(n=a.n + b.n, s=a.s + b.s, m=a.m + b.m, bsum=a.bsum + b.bsum)


def stats_per_label(
    labels: np.ndarray, pixels: np.ndarray, original_pixels: np.ndarray
) -> Dict[int, RegionStats]:
    """Statistics for every label of a label image in one vectorised pass

    Args:
        labels: (H, W) integer label image
        pixels: (H, W, 3) transformed colours
        original_pixels: (H, W, 3) colours before the homography
    """
    flat_labels = np.asarray(labels).reshape(-1)
    points = _as_points(pixels)
    originals = _as_points(original_pixels)
    if not (len(flat_labels) == len(points) == len(originals)):
        raise InputError("label image and pixel arrays differ in size")

    ids, inverse = np.unique(flat_labels, return_inverse=True)
    k = len(ids)
    counts = np.bincount(inverse, minlength=k)
    s = np.stack(
        [np.bincount(inverse, weights=points[:, c], minlength=k) for c in range(3)], axis=1
    )
    m = np.empty((k, 3, 3))
    for i in range(3):
        for j in range(i, 3):
            column = np.bincount(inverse, weights=points[:, i] * points[:, j], minlength=k)
            m[:, i, j] = column
            m[:, j, i] = column
    bsum = np.bincount(inverse, weights=originals.sum(axis=1) / 3.0, minlength=k)

    return {
        int(label): RegionStats(int(counts[idx]), s[idx].copy(), m[idx].copy(), float(bsum[idx]))
        for idx, label in enumerate(ids)
    }


def scatter_eigenvalues(st: RegionStats) -> Tuple[float, float, float]:
    """Clamped scatter eigenvalues, descending, via the analytic solver"""
    _require_pixels(st)
    n = st.n
    s0, s1, s2 = st.s.tolist()
    (m00, m01, m02), (_, m11, m12), (_, _, m22) = st.m.tolist()
    a00 = m00 - s0 * s0 / n
    a11 = m11 - s1 * s1 / n
    a22 = m22 - s2 * s2 / n
    values = symmetric_eigenvalues(
        a00, m01 - s0 * s1 / n, m02 - s0 * s2 / n, a11, m12 - s1 * s2 / n, a22
    )
    return clamp_eigenvalues(values, a00 + a11 + a22, m00 + m11 + m22)


def scatter_trace(st: RegionStats) -> float:
    """trace(S), the sum of the scatter eigenvalues, without an eigen solve"""
    _require_pixels(st)
    s0, s1, s2 = st.s.tolist()
    trace = float(np.trace(st.m)) - (s0 * s0 + s1 * s1 + s2 * s2) / st.n
    return trace if trace > 0.0 else 0.0


def spectrum(st: RegionStats) -> ScatterSpectrum:
    """Mean, eigenvalues and orthonormal eigenvectors of the scatter matrix"""
    _require_pixels(st)
    scatter = st.scatter()
    values, vectors = symmetric_eigh(scatter)
    clamped = clamp_eigenvalues(
        (float(values[0]), float(values[1]), float(values[2])),
        float(np.trace(scatter)),
        float(np.trace(st.m)),
    )
    return ScatterSpectrum(np.array(clamped), vectors, st.s / st.n)


def rank_ssd(st: RegionStats, rank: int) -> float:
    """Least-squares deviation of a segment from its best rank-r affine model

    Rank 0 fits a point, rank 1 a line and rank 2 a plane through the mean;
    the residual is the sum of the scatter eigenvalues the model cannot
    absorb.
    """
    if rank not in RANKS:
        raise ValueError(f"rank must be 0, 1 or 2, got {rank}")
    if rank == 0:
        return scatter_trace(st)
    _, l2, l3 = scatter_eigenvalues(st)
    if rank == 1:
        return l2 + l3
    return l3
