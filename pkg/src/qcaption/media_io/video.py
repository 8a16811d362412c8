"""Video handles, frames, and clip arithmetic on top of the decoder contract.

Timestamps form a half-open interval [0, duration): asking for the exact
duration is an error, and a frame request resolves to the nearest decodable
frame at or before the requested time (index = floor(t * fps)).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from ..errors import DecodeError, TimestampOutOfRange
from . import decoder
from .decoder import DecoderConfig

_EPS = 1e-9


@dataclass(frozen=True)
class VideoHandle:
    """Probed container metadata; the unit every media op works from."""

    path: Path
    duration_s: float
    fps: float
    frame_count: int
    width: int
    height: int

    def __post_init__(self):
        if self.duration_s <= 0 or self.fps <= 0 or self.frame_count < 1:
            raise DecodeError(f"degenerate stream metadata for {self.path}")
        if abs(self.frame_count - self.duration_s * self.fps) > self.fps:
            raise DecodeError(
                f"inconsistent metadata for {self.path}: "
                f"{self.frame_count} frames vs {self.duration_s:.3f}s at {self.fps:.3f} fps"
            )


@dataclass(frozen=True)
class FrameImage:
    """One decoded frame: row-major 8-bit RGB plus its position in the video."""

    frame_index: int
    timestamp_s: float
    width: int
    height: int
    pixels: bytes

    def __post_init__(self):
        expected = self.width * self.height * 3
        if len(self.pixels) != expected:
            raise ValueError(f"pixel buffer is {len(self.pixels)} bytes, expected {expected}")

    def to_array(self) -> np.ndarray:
        """View as (height, width, 3) uint8."""
        return np.frombuffer(self.pixels, dtype=np.uint8).reshape(self.height, self.width, 3)

    @classmethod
    def from_array(cls, array: np.ndarray, frame_index: int = 0,
                   timestamp_s: float = 0.0) -> "FrameImage":
        if array.ndim != 3 or array.shape[2] != 3 or array.dtype != np.uint8:
            raise ValueError("expected (h, w, 3) uint8 array")
        h, w = array.shape[:2]
        return cls(frame_index=frame_index, timestamp_s=timestamp_s,
                   width=w, height=h, pixels=array.tobytes())


@dataclass(frozen=True)
class ClipSpec:
    start_s: float
    end_s: float

    def __post_init__(self):
        if not 0 <= self.start_s < self.end_s:
            raise ValueError(f"invalid clip span [{self.start_s}, {self.end_s}]")

    @property
    def duration_s(self) -> float:
        return self.end_s - self.start_s


def _parse_rate(raw: str | None) -> float:
    if not raw:
        return 0.0
    try:
        frac = Fraction(raw)
    except (ValueError, ZeroDivisionError):
        return 0.0
    return float(frac)


def probe(path: str | Path, config: DecoderConfig | None = None) -> VideoHandle:
    """Probe a container and return validated stream metadata.

    Still images decode as single-frame videos (frame_count = 1).
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    info = decoder.probe_streams(str(path), config)
    stream = info["streams"][0]
    fps = _parse_rate(stream.get("avg_frame_rate"))
    if fps <= 0:
        fps = 25.0
    try:
        frame_count = int(stream.get("nb_frames", 0))
    except (TypeError, ValueError):
        frame_count = 0
    duration_raw = info.get("format", {}).get("duration")
    try:
        duration = float(duration_raw)
    except (TypeError, ValueError):
        duration = 0.0
    if duration <= 0 and frame_count > 0:
        duration = frame_count / fps
    if frame_count <= 0 and duration > 0:
        frame_count = max(1, round(duration * fps))
    width = int(stream.get("width", 0))
    height = int(stream.get("height", 0))
    if width <= 0 or height <= 0:
        raise DecodeError(f"missing frame dimensions for {path}")
    return VideoHandle(path=path, duration_s=duration, fps=fps,
                       frame_count=frame_count, width=width, height=height)


def _frame_index_at(handle: VideoHandle, timestamp_s: float) -> int:
    index = math.floor(timestamp_s * handle.fps + _EPS)
    return min(index, handle.frame_count - 1)


def frames_at(handle: VideoHandle, timestamps: Sequence[float],
              config: DecoderConfig | None = None) -> list[FrameImage]:
    """One frame per timestamp, nearest decodable frame at or before it.

    Output order matches input order; results are deterministic for a fixed
    file. Fetches run concurrently under the decoder's subprocess bound;
    duplicate target frames are decoded once.
    """
    for t in timestamps:
        if not 0 <= t < handle.duration_s:
            raise TimestampOutOfRange(
                f"t={t} outside [0, {handle.duration_s}) for {handle.path}"
            )
    indices = [_frame_index_at(handle, t) for t in timestamps]
    unique = sorted(set(indices))
    if not unique:
        return []
    if len(unique) == 1:
        index = unique[0]
        # seek half a frame early so a decoder that returns "first frame at or
        # after the seek point" lands exactly on `index`
        seek = max(0.0, (index - 0.5) / handle.fps)
        pixels = decoder.fetch_frame_rgb24(str(handle.path), seek,
                                           handle.width, handle.height, config)
        pixels_by_index = {index: pixels}
    else:
        buffers = decoder.fetch_frames_by_index(str(handle.path), unique,
                                                handle.width, handle.height, config)
        pixels_by_index = dict(zip(unique, buffers))

    return [
        FrameImage(
            frame_index=index,
            timestamp_s=index / handle.fps,
            width=handle.width,
            height=handle.height,
            pixels=pixels_by_index[index],
        )
        for index in indices
    ]


def iter_all_frames(handle: VideoHandle, stride_s: float,
                    config: DecoderConfig | None = None) -> Iterator[FrameImage]:
    """Yield frames at t = 0, stride, 2*stride, ... < duration via one
    streaming decoder subprocess.

    Sample instants that collapse onto the same source frame (stride below
    the frame interval) are deduplicated, so yielded frame indexes are
    strictly increasing.
    """
    if stride_s <= 0:
        raise ValueError(f"stride_s must be > 0, got {stride_s}")
    n_samples = math.ceil((handle.duration_s - _EPS) / stride_s)
    if n_samples <= 0:
        return
    rate = 1.0 / stride_s
    previous_index = -1
    stream = decoder.stream_frames_rgb24(str(handle.path), rate, n_samples,
                                         handle.width, handle.height, config)
    for sample, pixels in enumerate(stream):
        index = min(math.floor(sample * stride_s * handle.fps + _EPS),
                    handle.frame_count - 1)
        if index <= previous_index:
            continue
        previous_index = index
        yield FrameImage(
            frame_index=index,
            timestamp_s=index / handle.fps,
            width=handle.width,
            height=handle.height,
            pixels=pixels,
        )


def extract_clips(handle: VideoHandle, n_clips: int = 4,
                  clip_len_s: float = 5.0) -> list[ClipSpec]:
    """Split the video into n equal segments and center one clip per segment
    midpoint, clamped into [0, duration]. Clamping may cause overlap."""
    if n_clips < 1:
        raise ValueError("n_clips must be >= 1")
    if clip_len_s <= 0:
        raise ValueError("clip_len_s must be > 0")
    duration = handle.duration_s
    length = min(clip_len_s, duration)
    segment = duration / n_clips
    clips = []
    for i in range(n_clips):
        midpoint = (i + 0.5) * segment
        start = min(max(midpoint - length / 2, 0.0), duration - length)
        clips.append(ClipSpec(start_s=start, end_s=start + length))
    return clips


def export_clip(handle: VideoHandle, clip: ClipSpec, out_path: str | Path,
                config: DecoderConfig | None = None) -> Path:
    """Write the clip as a standalone playable file."""
    out_path = Path(out_path)
    if not out_path.parent.is_dir():
        raise OSError(f"output directory does not exist: {out_path.parent}")
    decoder.export_clip_file(str(handle.path), str(out_path),
                             clip.start_s, clip.duration_s, config)
    if not out_path.exists() or os.path.getsize(out_path) == 0:
        raise DecodeError(f"clip export produced no file at {out_path}")
    return out_path
