#!/usr/bin/env python

"""
Raster I/O - RGB images, 16-bit label maps, binary masks and JSON reports
"""

import json
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np
from loguru import logger
from PIL import Image, UnidentifiedImageError

from src.errors import InputError

PathLike = Union[str, Path]
MAX_LABEL = 65535


def _open(path: PathLike) -> Image.Image:
    try:
        image = Image.open(path)
        image.load()
        return image
    except (OSError, UnidentifiedImageError) as e:
        raise InputError(f"cannot read image {path}: {e}") from None


def read_rgb(path: PathLike) -> np.ndarray:
    """Decode an image (PNG, PPM, ...) as an (H, W, 3) uint8 array"""
    image = _open(path)
    if image.mode not in ("RGB", "RGBA", "L", "P"):
        raise InputError(f"{path}: expected an 8-bit image, got mode {image.mode}")
    return np.asarray(image.convert("RGB"), dtype=np.uint8)


def write_rgb(path: PathLike, image: np.ndarray) -> None:
    pixels = np.asarray(image)
    if pixels.dtype != np.uint8 or pixels.ndim != 3 or pixels.shape[2] != 3:
        raise InputError(f"expected an (H, W, 3) uint8 image, got {pixels.dtype} {pixels.shape}")
    Image.fromarray(pixels).save(path)


def write_label_map(path: PathLike, labels: np.ndarray) -> None:
    """Write a label image as a single-channel 16-bit PNG"""
    values = np.asarray(labels)
    if values.ndim != 2:
        raise InputError(f"label map must be 2-D, got shape {values.shape}")
    if values.size and (values.min() < 0 or values.max() > MAX_LABEL):
        raise InputError(f"label values must lie in [0, {MAX_LABEL}] for a 16-bit PNG")
    Image.fromarray(values.astype(np.uint16)).save(path, format="PNG")


def read_label_map(path: PathLike) -> np.ndarray:
    """Read a label image (16- or 8-bit single channel) as uint16"""
    image = _open(path)
    if image.mode not in ("I;16", "I;16B", "I;16L", "I", "L", "P"):
        raise InputError(f"{path}: label maps must be single-channel, got mode {image.mode}")
    return np.asarray(image).astype(np.uint16)


def read_mask(path: PathLike) -> np.ndarray:
    """Read a 0/255 binary mask as a boolean array"""
    return np.asarray(_open(path).convert("L")) > 127


def write_mask(path: PathLike, mask: np.ndarray) -> None:
    values = np.where(np.asarray(mask, dtype=bool), 255, 0).astype(np.uint8)
    Image.fromarray(values).save(path, format="PNG")


def write_json(path: PathLike, payload: Dict[str, Any]) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    logger.debug(f"📝 Wrote {path}")
