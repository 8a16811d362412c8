"""Frame-selection strategies.

All strategies return a KeyframeSet of at most n frames sorted by timestamp,
with exactly n frames whenever the video has that many decodable frames.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..media_io import FrameImage, VideoHandle, frames_at, iter_all_frames
from ..media_io.video import _frame_index_at
from .colorspace import frame_difference, rgb_to_luv
from .kmeans import kmeans
from .stats import downscale_max_dim, image_histogram, laplacian_variance

STRATEGIES = ("katna", "regular", "random", "first_n", "single", "clips")

DEFAULT_N_FRAMES = 8
DEFAULT_DIFF_THRESHOLD = 5.0
DEFAULT_HISTOGRAM_BINS = 16
SCORING_MAX_DIM = 256
MAX_SCAN_FPS = 10.0


@dataclass
class KeyframeSet:
    """Selected frames plus how they were chosen."""

    frames: list[FrameImage]
    strategy: str
    seed: int | None = None
    params: dict = field(default_factory=dict)
    trace: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        timestamps = [f.timestamp_s for f in self.frames]
        if timestamps != sorted(timestamps):
            raise ValueError("frames must be sorted by timestamp")


def _fetch_by_indices(handle: VideoHandle, indices: list[int]) -> list[FrameImage]:
    return frames_at(handle, [i / handle.fps for i in indices])


def _dedupe_ordered(indices: list[int]) -> list[int]:
    seen: set[int] = set()
    out = []
    for i in indices:
        if i not in seen:
            seen.add(i)
            out.append(i)
    return out


def regular_sample(handle: VideoHandle, n: int = DEFAULT_N_FRAMES) -> KeyframeSet:
    """Frame at the midpoint of each of n equal segments of [0, duration)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    midpoints = [(i + 0.5) * handle.duration_s / n for i in range(n)]
    indices = _dedupe_ordered([_frame_index_at(handle, t) for t in midpoints])
    frames = _fetch_by_indices(handle, indices)
    return KeyframeSet(frames=frames, strategy="regular", params={"n": n})


def single_frame(handle: VideoHandle) -> KeyframeSet:
    """The video-midpoint frame; regular sampling with n = 1."""
    chosen = regular_sample(handle, 1)
    return KeyframeSet(frames=chosen.frames, strategy="single", params={"n": 1})


def sample_frame_indices(frame_count: int, n: int, seed: int) -> list[int]:
    """n distinct frame indices drawn uniformly without replacement, sorted.
    All indices when frame_count <= n."""
    if frame_count <= n:
        return list(range(frame_count))
    return sorted(random.Random(seed).sample(range(frame_count), n))


def random_sample(handle: VideoHandle, n: int = DEFAULT_N_FRAMES, *,
                  seed: int) -> KeyframeSet:
    """Uniform sample of n distinct frames, deterministic per seed."""
    if n < 1:
        raise ValueError("n must be >= 1")
    indices = sample_frame_indices(handle.frame_count, n, seed)
    frames = _fetch_by_indices(handle, indices)
    return KeyframeSet(frames=frames, strategy="random", seed=seed, params={"n": n})


def first_n(handle: VideoHandle, n: int = DEFAULT_N_FRAMES,
            stride_s: float = 1.0) -> KeyframeSet:
    """First n frames at fixed spacing from t = 0."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if stride_s <= 0:
        raise ValueError("stride_s must be > 0")
    timestamps = []
    t = 0.0
    while len(timestamps) < n and t < handle.duration_s:
        timestamps.append(t)
        t += stride_s
    indices = _dedupe_ordered([_frame_index_at(handle, t) for t in timestamps])
    frames = _fetch_by_indices(handle, indices)
    return KeyframeSet(frames=frames, strategy="first_n",
                       params={"n": n, "stride_s": stride_s})


def katna_keyframes(handle: VideoHandle, n: int = DEFAULT_N_FRAMES,
                    diff_threshold: float = DEFAULT_DIFF_THRESHOLD,
                    bins: int = DEFAULT_HISTOGRAM_BINS, *,
                    seed: int = 0) -> KeyframeSet:
    """Selective keyframe extraction.

    Scan frames at up to 10 fps, keep candidates whose LUV difference from
    the last kept candidate reaches the threshold (first frame always kept),
    cluster candidate color histograms with k-means, and pick each cluster's
    sharpest frame by Laplacian variance. When fewer candidates than n
    survive, regular-sampled frames fill the shortfall.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    scan_stride = 1.0 / min(handle.fps, MAX_SCAN_FPS)

    candidates: list[FrameImage] = []
    scored: list[FrameImage] = []       # downscaled twins used for scoring
    last_luv = None
    for frame in iter_all_frames(handle, scan_stride):
        small = downscale_max_dim(frame, SCORING_MAX_DIM)
        luv = rgb_to_luv(small)
        if last_luv is None or frame_difference(luv, last_luv) >= diff_threshold:
            candidates.append(frame)
            scored.append(small)
            last_luv = luv

    vectors = [image_histogram(s, bins).ravel() for s in scored]
    sharpness = [laplacian_variance(s) for s in scored]

    k = min(n, len(candidates))
    clustering = kmeans(vectors, k, seed=seed)
    picked: list[int] = []
    for cluster in range(k):
        members = [i for i, a in enumerate(clustering.assignments) if a == cluster]
        picked.append(max(members, key=lambda i: sharpness[i]))

    selected = {candidates[i].frame_index: candidates[i] for i in picked}
    fallback_filled = 0
    if len(selected) < n:
        for frame in regular_sample(handle, n).frames:
            if len(selected) >= n:
                break
            if frame.frame_index not in selected:
                selected[frame.frame_index] = frame
                fallback_filled += 1

    frames = sorted(selected.values(), key=lambda f: f.timestamp_s)
    trace = {
        "candidates": [
            {
                "frame_index": candidates[i].frame_index,
                "timestamp_s": candidates[i].timestamp_s,
                "sharpness": sharpness[i],
                "cluster": int(clustering.assignments[i]),
            }
            for i in range(len(candidates))
        ],
        "wcss_per_iter": clustering.wcss_per_iter,
        "picked_frame_indices": sorted(candidates[i].frame_index for i in picked),
        "fallback_filled": fallback_filled,
    }
    return KeyframeSet(
        frames=frames,
        strategy="katna",
        seed=seed,
        params={"n": n, "diff_threshold": diff_threshold, "bins": bins,
                "scan_stride_s": scan_stride},
        trace=trace,
    )


def select_frames(handle: VideoHandle, strategy: str, n: int = DEFAULT_N_FRAMES,
                  seed: int = 0, **params) -> KeyframeSet:
    """Dispatch by strategy name (media-file strategies only, not clips)."""
    if strategy == "katna":
        return katna_keyframes(handle, n, seed=seed, **params)
    if strategy == "regular":
        return regular_sample(handle, n)
    if strategy == "random":
        return random_sample(handle, n, seed=seed)
    if strategy == "first_n":
        return first_n(handle, n, **params)
    if strategy == "single":
        return single_frame(handle)
    raise ValueError(f"unknown frame strategy {strategy!r}")
