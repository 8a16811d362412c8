"""Frame-selection strategies and their scoring primitives."""

from .colorspace import frame_difference, rgb_to_luv
from .kmeans import KMeansResult, kmeans
from .stats import downscale_max_dim, image_histogram, laplacian_variance
from .strategies import (
    DEFAULT_N_FRAMES,
    STRATEGIES,
    KeyframeSet,
    first_n,
    katna_keyframes,
    random_sample,
    regular_sample,
    sample_frame_indices,
    select_frames,
    single_frame,
)

__all__ = [
    "DEFAULT_N_FRAMES",
    "KMeansResult",
    "KeyframeSet",
    "STRATEGIES",
    "downscale_max_dim",
    "first_n",
    "frame_difference",
    "image_histogram",
    "katna_keyframes",
    "kmeans",
    "laplacian_variance",
    "random_sample",
    "regular_sample",
    "rgb_to_luv",
    "sample_frame_indices",
    "select_frames",
    "single_frame",
]
