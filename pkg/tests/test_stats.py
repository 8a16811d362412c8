"""Histogram and sharpness scoring, with a hand-convolution oracle."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcaption.frame_selection import (
    downscale_max_dim,
    image_histogram,
    laplacian_variance,
)
from qcaption.media_io import FrameImage


def gray_frame(matrix):
    array = np.asarray(matrix, dtype=np.uint8)
    return FrameImage.from_array(np.stack([array] * 3, axis=-1))


def checkerboard(size=8, cell=1):
    ys, xs = np.mgrid[0:size, 0:size]
    board = (((ys // cell) + (xs // cell)) % 2 * 255).astype(np.uint8)
    return board


def box_blur3(gray):
    """Independent 3x3 box blur with edge replication (test-local)."""
    padded = np.pad(gray.astype(float), 1, mode="edge")
    out = np.zeros_like(gray, dtype=float)
    for dy in (0, 1, 2):
        for dx in (0, 1, 2):
            out += padded[dy:dy + gray.shape[0], dx:dx + gray.shape[1]]
    return np.clip(out / 9.0, 0, 255).astype(np.uint8)


def oracle_laplacian_variance(gray):
    """Direct double-loop convolution + population variance."""
    gray = np.asarray(gray, dtype=float)
    h, w = gray.shape
    def at(y, x):
        return gray[min(max(y, 0), h - 1), min(max(x, 0), w - 1)]
    responses = []
    for y in range(h):
        for x in range(w):
            responses.append(at(y - 1, x) + at(y + 1, x) + at(y, x - 1)
                             + at(y, x + 1) - 4 * at(y, x))
    responses = np.array(responses)
    return float(np.mean((responses - responses.mean()) ** 2))


class TestImageHistogram:
    def test_solid_black(self):
        hist = image_histogram(gray_frame(np.zeros((4, 4))), bins=16)
        for channel in hist:
            assert channel[0] == 1.0
            assert np.all(channel[1:] == 0.0)

    def test_two_pixel_extremes(self):
        frame = FrameImage.from_array(
            np.array([[[0, 0, 0], [255, 255, 255]]], dtype=np.uint8))
        hist = image_histogram(frame, bins=16)
        for channel in hist:
            assert channel[0] == pytest.approx(0.5)
            assert channel[15] == pytest.approx(0.5)
            assert channel[1:15].sum() == 0.0

    def test_channels_sum_to_one(self):
        rng = np.random.default_rng(1)
        frame = FrameImage.from_array(rng.integers(0, 256, (9, 7, 3), dtype=np.uint8))
        hist = image_histogram(frame)
        assert np.allclose(hist.sum(axis=1), 1.0, atol=1e-9)
        assert np.all(hist >= 0.0)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_spatial_permutation_invariant(self, seed):
        rng = np.random.default_rng(seed)
        pixels = rng.integers(0, 256, (6, 6, 3), dtype=np.uint8)
        flat = pixels.reshape(-1, 3)
        shuffled = flat[rng.permutation(len(flat))].reshape(6, 6, 3)
        original = image_histogram(FrameImage.from_array(pixels))
        permuted = image_histogram(FrameImage.from_array(shuffled))
        assert np.array_equal(original, permuted)

    def test_bins_precondition(self):
        with pytest.raises(ValueError):
            image_histogram(gray_frame(np.zeros((2, 2))), bins=1)


class TestLaplacianVariance:
    def test_constant_image_zero(self):
        assert laplacian_variance(gray_frame(np.full((8, 8), 137))) == 0.0

    def test_sharp_beats_blurred(self):
        sharp = checkerboard(8, 1)
        blurred = box_blur3(sharp)
        assert laplacian_variance(gray_frame(sharp)) > laplacian_variance(gray_frame(blurred))

    def test_specific_matrix_against_oracle(self):
        matrix = [[10, 20, 30, 40],
                  [50, 60, 70, 80],
                  [90, 100, 110, 120],
                  [130, 230, 10, 250]]
        got = laplacian_variance(gray_frame(matrix))
        assert got == pytest.approx(oracle_laplacian_variance(matrix), abs=1e-9)

    def test_randomized_against_oracle(self):
        rng = np.random.default_rng(17)
        for _ in range(5):
            gray = rng.integers(0, 256, (6, 5)).astype(np.uint8)
            assert laplacian_variance(gray_frame(gray)) == pytest.approx(
                oracle_laplacian_variance(gray), abs=1e-9)


class TestDownscale:
    def test_no_change_when_small(self):
        frame = gray_frame(np.zeros((10, 10)))
        assert downscale_max_dim(frame, 256) is frame

    def test_aspect_preserved(self):
        rng = np.random.default_rng(2)
        frame = FrameImage.from_array(rng.integers(0, 256, (512, 1024, 3), dtype=np.uint8))
        small = downscale_max_dim(frame, 256)
        assert small.width == 256
        assert small.height == 128

    def test_solid_color_survives(self):
        frame = FrameImage.from_array(np.full((300, 400, 3), 99, dtype=np.uint8))
        small = downscale_max_dim(frame, 256)
        assert np.all(small.to_array() == 99)
