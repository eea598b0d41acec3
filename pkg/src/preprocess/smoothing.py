#!/usr/bin/env python

"""
Edge-preserving and plain smoothing of colour images
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from src.errors import ConfigurationError, InputError


@dataclass(frozen=True)
class BilateralParams:
    """Range sigma `f_r` (image colour units), spatial sigma `g_s` and window radius (pixels)"""

    f_r: float
    g_s: float
    radius: int

    def __post_init__(self):
        if self.f_r <= 0 or self.g_s <= 0:
            raise ConfigurationError(f"bilateral sigmas must be positive (f_r={self.f_r}, g_s={self.g_s})")
        if self.radius < 1:
            raise ConfigurationError(f"bilateral radius must be >= 1, got {self.radius}")


def default_radius(g_s: float, max_radius: int = 16) -> int:
    """ceil(2 g_s), capped"""
    return max(1, min(int(math.ceil(2.0 * g_s)), max_radius))


def _check_image(image: np.ndarray) -> np.ndarray:
    img = np.asarray(image, dtype=np.float64)
    if img.ndim != 3 or img.shape[2] != 3 or img.shape[0] == 0 or img.shape[1] == 0:
        raise InputError(f"expected a non-empty (H, W, 3) image, got shape {img.shape}")
    return img


def bilateral_filter(image: np.ndarray, params: BilateralParams) -> np.ndarray:
    """Gaussian-range x Gaussian-spatial bilateral filter with clamp-to-edge borders

    Each output pixel is the normalised weighted mean over its
    (2 radius + 1)^2 window.
    """
    img = _check_image(image)
    height, width, _ = img.shape
    r = params.radius
    padded = np.pad(img, ((r, r), (r, r), (0, 0)), mode="edge")
    range_scale = -1.0 / (2.0 * params.f_r * params.f_r)
    spatial_scale = -1.0 / (2.0 * params.g_s * params.g_s)

    numerator = np.zeros_like(img)
    denominator = np.zeros((height, width))
    for dy in range(-r, r + 1):
        for dx in range(-r, r + 1):
            shifted = padded[r + dy:r + dy + height, r + dx:r + dx + width]
            diff = shifted - img
            weight = np.exp(
                spatial_scale * (dy * dy + dx * dx)
                + range_scale * np.einsum("ijk,ijk->ij", diff, diff)
            )
            numerator += weight[..., None] * shifted
            denominator += weight
    return numerator / denominator[..., None]


def gaussian_smooth(image: np.ndarray, sigma: float) -> np.ndarray:
    """Per-channel Gaussian blur, edge pixels replicated"""
    img = _check_image(image)
    if sigma <= 0:
        raise ConfigurationError(f"gaussian sigma must be positive, got {sigma}")
    return ndimage.gaussian_filter(img, sigma=(sigma, sigma, 0.0), mode="nearest")
