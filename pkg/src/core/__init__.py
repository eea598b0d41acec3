"""Colour statistics and least-squares model fitting."""

from src.core.colour import (
    ColourVec,
    RegionStats,
    ScatterSpectrum,
    merge_stats,
    rank_ssd,
    scatter_eigenvalues,
    scatter_trace,
    spectrum,
    stats_from_pixels,
    stats_per_label,
)

__all__ = [
    "ColourVec",
    "RegionStats",
    "ScatterSpectrum",
    "merge_stats",
    "rank_ssd",
    "scatter_eigenvalues",
    "scatter_trace",
    "spectrum",
    "stats_from_pixels",
    "stats_per_label",
]
