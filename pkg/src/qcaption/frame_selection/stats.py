"""Per-frame scoring primitives: color histograms and sharpness."""

from __future__ import annotations

import numpy as np

from ..media_io import FrameImage

# ITU-R 601 luma weights
_LUMA = np.array([0.299, 0.587, 0.114])

# 4-neighbor Laplacian
_LAPLACIAN = np.array([[0, 1, 0], [1, -4, 1], [0, 1, 0]], dtype=np.float64)


def image_histogram(frame: FrameImage, bins: int = 16) -> np.ndarray:
    """Per-channel (R, G, B) equal-width histogram over [0, 256), each
    channel normalized to sum 1. Returns a (3, bins) float array."""
    if bins < 2:
        raise ValueError("bins must be >= 2")
    pixels = frame.to_array().reshape(-1, 3)
    hist = np.empty((3, bins), dtype=np.float64)
    for c in range(3):
        counts, _ = np.histogram(pixels[:, c], bins=bins, range=(0, 256))
        hist[c] = counts / pixels.shape[0]
    return hist


def to_grayscale(frame: FrameImage) -> np.ndarray:
    """Float luma image (ITU-R 601 weights)."""
    return frame.to_array().astype(np.float64) @ _LUMA


def laplacian_variance(frame: FrameImage) -> float:
    """Population variance of the 3x3 Laplacian response over the luma
    image, with edge-replicate padding. Low values indicate blur."""
    gray = to_grayscale(frame)
    padded = np.pad(gray, 1, mode="edge")
    response = (
        padded[:-2, 1:-1] + padded[2:, 1:-1]
        + padded[1:-1, :-2] + padded[1:-1, 2:]
        - 4.0 * gray
    )
    return float(response.var())


def downscale_max_dim(frame: FrameImage, max_dim: int = 256) -> FrameImage:
    """Nearest-neighbor downscale so max(width, height) <= max_dim, aspect
    preserved. Returns the frame unchanged when already small enough."""
    if max(frame.width, frame.height) <= max_dim:
        return frame
    scale = max_dim / max(frame.width, frame.height)
    new_w = max(1, round(frame.width * scale))
    new_h = max(1, round(frame.height * scale))
    array = frame.to_array()
    rows = (np.arange(new_h) * frame.height / new_h).astype(int)
    cols = (np.arange(new_w) * frame.width / new_w).astype(int)
    small = array[rows][:, cols]
    return FrameImage(
        frame_index=frame.frame_index,
        timestamp_s=frame.timestamp_s,
        width=new_w,
        height=new_h,
        pixels=small.tobytes(),
    )
