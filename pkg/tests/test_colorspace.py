"""LUV conversion against an independent colorimetry path, plus differencing."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcaption.errors import DimensionMismatch
from qcaption.frame_selection import frame_difference, rgb_to_luv
from qcaption.media_io import FrameImage

# CIELUV of sRGB primaries under D65/2deg, from standard colorimetry tables
RED_LUV = (53.2408, 175.0151, 37.7564)


def solid(rgb, size=(2, 3)):
    return FrameImage.from_array(np.full((*size, 3), rgb, dtype=np.uint8))


class TestRgbToLuv:
    def test_black_is_origin(self):
        luv = rgb_to_luv(solid((0, 0, 0)))
        assert np.all(luv == 0.0)

    def test_white_lightness_exact(self):
        luv = rgb_to_luv(solid((255, 255, 255)))
        assert np.all(np.abs(luv[..., 0] - 100.0) <= 1e-6)
        assert np.all(np.abs(luv[..., 1:]) <= 1e-9)

    def test_red_matches_reference_tables(self):
        luv = rgb_to_luv(solid((255, 0, 0)))[0, 0]
        for got, expected in zip(luv, RED_LUV):
            assert got == pytest.approx(expected, abs=0.1)

    def test_total_and_in_range_over_random_pixels(self):
        rng = np.random.default_rng(99)
        pixels = rng.integers(0, 256, (100, 100, 3), dtype=np.uint8)
        luv = rgb_to_luv(FrameImage.from_array(pixels))
        assert np.all(np.isfinite(luv))
        assert np.all(luv[..., 0] >= 0.0)
        assert np.all(luv[..., 0] <= 100.0 + 1e-9)

    def test_shape_matches_source(self):
        luv = rgb_to_luv(solid((10, 200, 30), size=(5, 7)))
        assert luv.shape == (5, 7, 3)


class TestFrameDifference:
    def test_identical_zero(self):
        luv = rgb_to_luv(solid((120, 50, 200)))
        assert frame_difference(luv, luv) == 0.0

    def test_black_vs_white_from_conversions(self):
        black = rgb_to_luv(solid((0, 0, 0)))
        white = rgb_to_luv(solid((255, 255, 255)))
        # white maps to (100, 0, 0), so the mean abs difference is 100/3
        assert frame_difference(black, white) == pytest.approx(100.0 / 3.0, abs=1e-6)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_symmetry(self, seed):
        rng = np.random.default_rng(seed)
        a = rgb_to_luv(FrameImage.from_array(
            rng.integers(0, 256, (4, 4, 3), dtype=np.uint8)))
        b = rgb_to_luv(FrameImage.from_array(
            rng.integers(0, 256, (4, 4, 3), dtype=np.uint8)))
        assert frame_difference(a, b) == frame_difference(b, a)
        assert frame_difference(a, b) >= 0.0

    def test_dimension_mismatch(self):
        a = rgb_to_luv(solid((0, 0, 0), size=(2, 2)))
        b = rgb_to_luv(solid((0, 0, 0), size=(3, 2)))
        with pytest.raises(DimensionMismatch):
            frame_difference(a, b)
