#!/usr/bin/env python

"""
Projective colour-space transform

A one-parameter-pair family of 3-D homographies, symmetric about the grey
axis, fixing black and mapping the primaries and white as

    (0,0,0) -> (0,0,0)      (1,1,1) -> (b,b,b)
    (1,0,0) -> (1,a,a)      (0,1,0) -> (a,1,a)      (0,0,1) -> (a,a,1)

Lines and planes map to lines and planes, so cluster ranks survive it.
"""

from dataclasses import dataclass

import numpy as np

from src.core.colour import ColourVec
from src.errors import ConfigurationError, DegenerateTransformError, InputError

W_MIN = 1e-12
_CUBE_SLACK = 1e-9


@dataclass(frozen=True)
class HomographyParams:
    """Saturation transfer `a` and brightness compression `b`"""

    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.a <= 1.0:
            raise ConfigurationError(f"homography a={self.a} outside [0, 1]")
        lower = (2.0 * self.a + 1.0) / 3.0
        if not lower < self.b <= 1.0:
            raise ConfigurationError(
                f"homography b={self.b} outside ({lower:.6g}, 1] for a={self.a}"
            )


@dataclass(frozen=True, eq=False)
class ColourHomography:
    """4x4 matrix acting on homogeneous colours (R, G, B, 1)"""

    h: np.ndarray

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.h, np.eye(4)))


def build_homography(p: HomographyParams) -> ColourHomography:
    a, b = p.a, p.b
    ab = a * b
    c = a - b / 2.0 + 0.5
    w0 = -a + 1.5 * b - 0.5
    h = np.array(
        [
            [b, ab, ab, 0.0],
            [ab, b, ab, 0.0],
            [ab, ab, b, 0.0],
            [c, c, c, w0],
        ]
    )
    return ColourHomography(h)


def apply_homography(h: ColourHomography, p: ColourVec) -> ColourVec:
    """Map one colour of the unit cube through the homography"""
    point = np.asarray(p, dtype=np.float64).reshape(3)
    if np.any(point < -_CUBE_SLACK) or np.any(point > 1.0 + _CUBE_SLACK):
        raise InputError(f"colour {point.tolist()} outside the unit cube")
    mapped = h.h @ np.append(point, 1.0)
    if mapped[3] <= W_MIN:
        raise DegenerateTransformError(f"W={mapped[3]:.3e} for colour {point.tolist()}")
    return mapped[:3] / mapped[3]


def transform_image(h: ColourHomography, image: np.ndarray) -> np.ndarray:
    """Vectorised `apply_homography` over an (H, W, 3) image in [0, 1]"""
    pixels = np.asarray(image, dtype=np.float64)
    mapped = pixels @ h.h[:, :3].T + h.h[:, 3]
    w = mapped[..., 3]
    if np.any(w <= W_MIN):
        raise DegenerateTransformError(f"W reaches {float(w.min()):.3e} inside the image")
    return mapped[..., :3] / w[..., None]
