"""Image smoothing and colour-space homography."""

from src.preprocess.homography import (
    ColourHomography,
    HomographyParams,
    apply_homography,
    build_homography,
    transform_image,
)
from src.preprocess.smoothing import BilateralParams, bilateral_filter, default_radius, gaussian_smooth

__all__ = [
    "ColourHomography",
    "HomographyParams",
    "apply_homography",
    "build_homography",
    "transform_image",
    "BilateralParams",
    "bilateral_filter",
    "default_radius",
    "gaussian_smooth",
]
