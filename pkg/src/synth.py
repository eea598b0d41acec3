#!/usr/bin/env python

"""
Synthetic test scenes with ground truth

Four scene kinds, one per cluster geometry:
- mondrian-rank0: flat matte patches (point clusters)
- shaded-rank1: matte patches under a horizontal brightness ramp (line clusters)
- dichromatic-rank2: shaded glossy cylinders, body colour plus white highlight (planar clusters)
- offscale-stripe: dichromatic cylinders whose highlight is clipped to white
"""

from dataclasses import dataclass
from typing import List, Literal, Optional, Tuple

import numpy as np
from loguru import logger

from src.errors import InputError

SceneKind = Literal["mondrian-rank0", "shaded-rank1", "dichromatic-rank2", "offscale-stripe"]
SCENE_KINDS: Tuple[str, ...] = ("mondrian-rank0", "shaded-rank1", "dichromatic-rank2", "offscale-stripe")

MIN_SIZE = 16
MAX_SEGMENTS = 32
MONDRIAN_LOW, MONDRIAN_HIGH = 40.0, 215.0
MONDRIAN_SEPARATION = 60.0
RAMP_LOW = 0.2
MIN_HUE_ANGLE = np.deg2rad(20.0)
MIN_SATURATION = np.deg2rad(12.0)
GREY = np.ones(3) / np.sqrt(3.0)
HIGHLIGHT_PEAK = 0.3
HIGHLIGHT_LOBE = 0.18

Rect = Tuple[int, int, int, int]  # y0, y1, x0, x1


@dataclass(frozen=True)
class SynthSceneSpec:
    kind: SceneKind = "mondrian-rank0"
    width: int = 128
    height: int = 128
    segments: int = 6
    noise: float = 3.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in SCENE_KINDS:
            raise InputError(f"unknown scene kind {self.kind!r}; choose from {', '.join(SCENE_KINDS)}")
        if self.width < MIN_SIZE or self.height < MIN_SIZE:
            raise InputError(f"scene must be at least {MIN_SIZE}x{MIN_SIZE}, got {self.width}x{self.height}")
        if not 1 <= self.segments <= MAX_SEGMENTS:
            raise InputError(f"segment count must lie in [1, {MAX_SEGMENTS}], got {self.segments}")
        if not np.isfinite(self.noise) or self.noise < 0:
            raise InputError(f"noise sigma must be >= 0, got {self.noise}")


@dataclass
class SynthScene:
    spec: SynthSceneSpec
    image: np.ndarray
    labels: np.ndarray
    stripe_mask: Optional[np.ndarray] = None


def guillotine_layout(height: int, width: int, count: int, rng: np.random.Generator) -> List[Rect]:
    """Split the frame into `count` rectangles, always cutting the largest along its longer side"""
    rects: List[Rect] = [(0, height, 0, width)]
    while len(rects) < count:
        rects.sort(key=lambda r: (r[1] - r[0]) * (r[3] - r[2]))
        y0, y1, x0, x1 = rects.pop()
        if y1 - y0 >= x1 - x0:
            cut = y0 + max(1, int(round((y1 - y0) * rng.uniform(0.3, 0.7))))
            rects += [(y0, cut, x0, x1), (cut, y1, x0, x1)]
        else:
            cut = x0 + max(1, int(round((x1 - x0) * rng.uniform(0.3, 0.7))))
            rects += [(y0, y1, x0, cut), (y0, y1, cut, x1)]
    return sorted(rects)


def band_layout(height: int, width: int, count: int) -> List[Rect]:
    """Full-width horizontal bands so every segment spans the whole x range"""
    edges = np.linspace(0, height, count + 1).round().astype(int)
    return [(int(edges[k]), int(edges[k + 1]), 0, width) for k in range(count)]


def _mondrian_colours(count: int, rng: np.random.Generator) -> np.ndarray:
    colours: List[np.ndarray] = []
    for _ in range(20000):
        candidate = rng.uniform(MONDRIAN_LOW, MONDRIAN_HIGH, size=3)
        if all(np.linalg.norm(candidate - c) >= MONDRIAN_SEPARATION for c in colours):
            colours.append(candidate)
            if len(colours) == count:
                return np.array(colours)
    raise InputError(f"cannot place {count} colours at separation {MONDRIAN_SEPARATION}")


def _chromatic_colours(count: int, rng: np.random.Generator, min_saturation: float = 0.0) -> np.ndarray:
    """Unit-max body colours with pairwise hue angle >= 20 degrees

    `min_saturation` is the smallest allowed angle to the grey axis, in radians.
    """
    colours: List[np.ndarray] = []
    for _ in range(20000):
        candidate = rng.uniform(0.15, 1.0, size=3)
        candidate /= candidate.max()
        unit = candidate / np.linalg.norm(candidate)
        if np.arccos(np.clip(unit @ GREY, -1.0, 1.0)) < min_saturation:
            continue
        if all(
            np.arccos(np.clip(unit @ (c / np.linalg.norm(c)), -1.0, 1.0)) >= MIN_HUE_ANGLE
            for c in colours
        ):
            colours.append(candidate)
            if len(colours) == count:
                return np.array(colours)
    raise InputError(f"cannot place {count} body colours {np.rad2deg(MIN_HUE_ANGLE):.0f} degrees apart")


def _cylinder_terms(width: int, lobe: float = HIGHLIGHT_LOBE) -> Tuple[np.ndarray, np.ndarray]:
    """Body and highlight magnitudes across x for a vertical cylinder

    Body shading falls off with the surface angle, which keeps the rim free
    of steep steps. `lobe` is the width of the specular highlight in x.
    """
    x = np.linspace(-1.0, 1.0, width)
    body = 0.2 + 0.5 * np.cos(0.5 * np.pi * x)
    highlight = HIGHLIGHT_PEAK * np.exp(-((x / lobe) ** 2))
    return body, highlight


def stripe_columns(width: int) -> slice:
    half = max(1, width // 32)
    centre = width // 2
    return slice(centre - half, centre + half)


def stripe_lobe(width: int) -> float:
    """Highlight width whose tail rounds to zero outside the clipped stripe"""
    half = max(1, width // 32)
    return 0.4 * half * 2.0 / (width - 1)


def generate_scene(spec: SynthSceneSpec) -> SynthScene:
    """Render a scene; the same spec always yields the same bytes"""
    rng = np.random.default_rng(spec.seed)
    h, w, k = spec.height, spec.width, spec.segments

    if spec.kind == "mondrian-rank0":
        rects = guillotine_layout(h, w, k, rng)
    else:
        rects = band_layout(h, w, k)

    labels = np.zeros((h, w), dtype=np.uint16)
    canvas = np.zeros((h, w, 3), dtype=np.float64)

    if spec.kind == "mondrian-rank0":
        colours = _mondrian_colours(k, rng)
        for label, (y0, y1, x0, x1) in enumerate(rects, start=1):
            canvas[y0:y1, x0:x1] = colours[label - 1]
            labels[y0:y1, x0:x1] = label
    elif spec.kind == "shaded-rank1":
        colours = _chromatic_colours(k, rng)
        ramp = RAMP_LOW + (1.0 - RAMP_LOW) * np.arange(w) / (w - 1)
        for label, (y0, y1, x0, x1) in enumerate(rects, start=1):
            canvas[y0:y1, x0:x1] = 255.0 * ramp[None, x0:x1, None] * colours[label - 1]
            labels[y0:y1, x0:x1] = label
    else:
        colours = _chromatic_colours(k, rng, min_saturation=MIN_SATURATION)
        if spec.kind == "offscale-stripe":
            body, highlight = _cylinder_terms(w, stripe_lobe(w))
        else:
            body, highlight = _cylinder_terms(w)
        for label, (y0, y1, x0, x1) in enumerate(rects, start=1):
            shade = body[None, x0:x1, None] * colours[label - 1] + highlight[None, x0:x1, None]
            canvas[y0:y1, x0:x1] = 255.0 * shade
            labels[y0:y1, x0:x1] = label

    if spec.noise > 0:
        canvas += rng.normal(0.0, spec.noise, size=canvas.shape)
    image = np.clip(np.round(canvas), 0, 255).astype(np.uint8)

    stripe_mask = None
    if spec.kind == "offscale-stripe":
        stripe_mask = np.zeros((h, w), dtype=bool)
        stripe_mask[:, stripe_columns(w)] = True
        image[stripe_mask] = 255

    logger.debug(f"🧪 Generated {spec.kind} scene {w}x{h}, {k} segments, seed={spec.seed}")
    return SynthScene(spec=spec, image=image, labels=labels, stripe_mask=stripe_mask)
