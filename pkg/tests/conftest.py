"""Shared fixtures for the colorseg test suite"""

import numpy as np
import pytest

from src.config.config_manager import PipelineConfig
from src.core.colour import RegionStats, stats_from_pixels


def make_stats(points) -> RegionStats:
    """Statistics of points that are their own originals"""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    return stats_from_pixels(pts, pts)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def plain_config() -> PipelineConfig:
    """Identity colour transform, no smoothing"""
    return PipelineConfig(a=0.0, b=1.0, smoothing="none")


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch, tmp_path):
    """Keep COLORSEG_* settings from the developer's shell out of the tests"""
    for name in ("COLORSEG_LOG_LEVEL", "COLORSEG_LOG_FILE", "COLORSEG_LOG_ROTATION", "COLORSEG_THREADS"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)
