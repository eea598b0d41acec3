"""Tests for synthetic scene generation"""

import numpy as np
import pytest

from src.errors import InputError
from src.synth import SCENE_KINDS, SynthSceneSpec, band_layout, generate_scene, guillotine_layout


def test_mondrian_has_requested_segments():
    scene = generate_scene(SynthSceneSpec("mondrian-rank0", 64, 64, segments=4, seed=7))
    assert scene.image.shape == (64, 64, 3) and scene.image.dtype == np.uint8
    assert scene.labels.dtype == np.uint16
    assert np.unique(scene.labels).tolist() == [1, 2, 3, 4]
    assert scene.stripe_mask is None


def test_mondrian_patches_are_flat_without_noise():
    scene = generate_scene(SynthSceneSpec("mondrian-rank0", 48, 48, segments=5, noise=0.0, seed=2))
    means = []
    for label in range(1, 6):
        pixels = scene.image[scene.labels == label].astype(float)
        assert np.ptp(pixels, axis=0).max() == 0
        means.append(pixels[0])
    for i in range(5):
        for j in range(i + 1, 5):
            # rounding both colours can shave at most sqrt(3) off the separation
            assert np.linalg.norm(means[i] - means[j]) >= 58.0


@pytest.mark.parametrize("seed", range(3))
def test_shaded_segments_are_line_clusters(seed):
    scene = generate_scene(SynthSceneSpec("shaded-rank1", 128, 64, segments=3, noise=0.0, seed=seed))
    for label in range(1, 4):
        pixels = scene.image[scene.labels == label].astype(float)
        eigenvalues = np.linalg.eigvalsh(np.cov(pixels.T))
        assert eigenvalues[1] / eigenvalues[2] < 0.01


def test_dichromatic_segments_are_planar():
    scene = generate_scene(SynthSceneSpec("dichromatic-rank2", 96, 32, segments=2, noise=0.0, seed=4))
    pixels = scene.image[scene.labels == 1].astype(float)
    eigenvalues = np.linalg.eigvalsh(np.cov(pixels.T))
    assert eigenvalues[0] / eigenvalues[2] < 0.01


def test_offscale_stripe_is_white():
    scene = generate_scene(SynthSceneSpec("offscale-stripe", 64, 32, segments=2, noise=5.0, seed=1))
    assert scene.stripe_mask is not None
    assert scene.stripe_mask[:, 30:34].all()
    assert np.all(scene.image[scene.stripe_mask] == 255)
    assert scene.stripe_mask.sum() == 32 * 4


@pytest.mark.parametrize("seed", range(3))
def test_offscale_stripe_body_is_a_matte_line_away_from_grey(seed):
    scene = generate_scene(SynthSceneSpec("offscale-stripe", 64, 16, segments=1, noise=0.0, seed=seed))
    pixels = scene.image[~scene.stripe_mask].astype(float)
    _, singular, vt = np.linalg.svd(pixels, full_matrices=False)
    # no highlight survives outside the stripe
    assert singular[1] / singular[0] < 0.01
    grey = np.ones(3) / np.sqrt(3.0)
    assert np.arccos(min(1.0, abs(float(vt[0] @ grey)))) > np.deg2rad(11.0)
    steps = np.abs(np.diff(scene.image[0].astype(int), axis=0)).max(axis=1)
    assert max(steps[:29].max(), steps[34:].max()) <= 10


def test_same_spec_same_bytes():
    spec = SynthSceneSpec("dichromatic-rank2", 40, 40, segments=3, noise=4.0, seed=9)
    first, second = generate_scene(spec), generate_scene(spec)
    assert first.image.tobytes() == second.image.tobytes()
    assert np.array_equal(first.labels, second.labels)
    other = generate_scene(SynthSceneSpec("dichromatic-rank2", 40, 40, segments=3, noise=4.0, seed=10))
    assert first.image.tobytes() != other.image.tobytes()


def test_layouts_cover_the_frame(rng):
    for count in (1, 5, 12):
        rects = guillotine_layout(40, 30, count, rng)
        assert len(rects) == count
        assert sum((y1 - y0) * (x1 - x0) for y0, y1, x0, x1 in rects) == 40 * 30
    bands = band_layout(10, 8, 3)
    assert [b[:2] for b in bands] == [(0, 3), (3, 7), (7, 10)]
    assert all(b[2:] == (0, 8) for b in bands)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"kind": "plaid"},
        {"width": 8},
        {"segments": 0},
        {"segments": 33},
        {"noise": -1.0},
    ],
)
def test_invalid_spec(kwargs):
    with pytest.raises(InputError):
        SynthSceneSpec(**kwargs)


def test_every_kind_renders():
    for kind in SCENE_KINDS:
        scene = generate_scene(SynthSceneSpec(kind, 32, 32, segments=2, seed=0))
        assert scene.labels.min() == 1 and scene.labels.max() == 2
