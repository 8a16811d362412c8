"""sRGB to CIE L*u*v* conversion and frame differencing.

The conversion linearizes sRGB gamma, maps to XYZ with the Rec.709/D65
matrix, and uses the matrix's own white (the image of RGB(1,1,1)) as the
reference white so that pure white lands on L* = 100 exactly.
"""

from __future__ import annotations

import numpy as np

from ..errors import DimensionMismatch
from ..media_io import FrameImage

# sRGB (D65) to XYZ
_RGB_TO_XYZ = np.array([
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
])

_WHITE = _RGB_TO_XYZ.sum(axis=1)  # XYZ of RGB(1,1,1)
_WHITE_DENOM = _WHITE[0] + 15.0 * _WHITE[1] + 3.0 * _WHITE[2]
_U_WHITE = 4.0 * _WHITE[0] / _WHITE_DENOM
_V_WHITE = 9.0 * _WHITE[1] / _WHITE_DENOM

_CBRT_THRESHOLD = (6.0 / 29.0) ** 3
_LINEAR_SLOPE = (29.0 / 3.0) ** 3


def _linearize(srgb: np.ndarray) -> np.ndarray:
    low = srgb <= 0.04045
    out = np.empty_like(srgb)
    out[low] = srgb[low] / 12.92
    out[~low] = ((srgb[~low] + 0.055) / 1.055) ** 2.4
    return out


def rgb_to_luv(frame: FrameImage) -> np.ndarray:
    """Per-pixel CIE L*u*v* of an RGB8 frame as an (h, w, 3) float64 array.

    L* is in [0, 100]; u*, v* are signed. Black maps to (0, 0, 0).
    """
    rgb = frame.to_array().astype(np.float64) / 255.0
    linear = _linearize(rgb)
    xyz = linear @ _RGB_TO_XYZ.T
    x, y, z = xyz[..., 0], xyz[..., 1], xyz[..., 2]

    y_rel = y / _WHITE[1]
    lightness = np.where(
        y_rel > _CBRT_THRESHOLD,
        116.0 * np.cbrt(y_rel) - 16.0,
        _LINEAR_SLOPE * y_rel,
    )

    denom = x + 15.0 * y + 3.0 * z
    safe = denom > 0
    u_prime = np.where(safe, 4.0 * x / np.where(safe, denom, 1.0), _U_WHITE)
    v_prime = np.where(safe, 9.0 * y / np.where(safe, denom, 1.0), _V_WHITE)

    u = 13.0 * lightness * (u_prime - _U_WHITE)
    v = 13.0 * lightness * (v_prime - _V_WHITE)
    return np.stack([lightness, u, v], axis=-1)


def frame_difference(a: np.ndarray, b: np.ndarray) -> float:
    """Mean absolute per-channel LUV difference, averaged over pixels and
    channels. Symmetric and non-negative."""
    if a.shape != b.shape:
        raise DimensionMismatch(f"LUV shapes differ: {a.shape} vs {b.shape}")
    return float(np.mean(np.abs(a - b)))
