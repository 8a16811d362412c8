"""Decoder subprocess contract.

All decoding goes through an external ffmpeg-compatible CLI, one subprocess
per call, bounded by a global semaphore. The exact argument lists are pinned
here; anything claiming compatibility (the bundled avtool shim, a system
ffmpeg) must accept them:

  probe:   FFPROBE -v error -select_streams v:0
             -show_entries stream=width,height,avg_frame_rate,nb_frames,codec_name
             -show_entries format=duration -of json INPUT
  frame:   FFMPEG -v error -ss {t:.6f} -i INPUT -frames:v 1
             -f rawvideo -pix_fmt rgb24 -
  select:  FFMPEG -v error -i INPUT -vf select=eq(n\,5)+eq(n\,15)
             -vsync 0 -frames:v {n} -f rawvideo -pix_fmt rgb24 -
  stream:  FFMPEG -v error -i INPUT -vf fps={rate:.6f} -frames:v {n}
             -f rawvideo -pix_fmt rgb24 -
  clip:    FFMPEG -v error -y -ss {t:.6f} -i INPUT -t {d:.6f} -an OUTPUT

The select form fetches several exact frame indexes in one pass (one
subprocess instead of one per frame); the seek form wins on long videos
where decoding from the start would dominate.

Binary resolution order: QCAPTION_FFMPEG / QCAPTION_FFPROBE environment
variables (shlex-split, so extra args are allowed), then ffmpeg/ffprobe on
PATH, then the bundled avtool shim.
"""

from __future__ import annotations

import json
import os
import shlex
import shutil
import subprocess
import sys
import threading
from dataclasses import dataclass, field
from typing import Iterator

from ..errors import DecodeError

DEFAULT_MAX_SUBPROCESSES = 4


def _resolve_tool(env_var: str, binary: str) -> list[str]:
    override = os.environ.get(env_var)
    if override:
        return shlex.split(override)
    if shutil.which(binary):
        return [binary]
    return [sys.executable, "-m", "qcaption.media_io.avtool", binary]


@dataclass
class DecoderConfig:
    """Which decoder binaries to run and how many may run at once."""

    ffmpeg: list[str] = field(default_factory=lambda: _resolve_tool("QCAPTION_FFMPEG", "ffmpeg"))
    ffprobe: list[str] = field(default_factory=lambda: _resolve_tool("QCAPTION_FFPROBE", "ffprobe"))
    max_subprocesses: int = DEFAULT_MAX_SUBPROCESSES

    def __post_init__(self):
        self._semaphore = threading.BoundedSemaphore(self.max_subprocesses)

    @classmethod
    def from_dict(cls, raw: dict) -> "DecoderConfig":
        kwargs = {}
        if raw.get("ffmpeg"):
            kwargs["ffmpeg"] = shlex.split(raw["ffmpeg"]) if isinstance(raw["ffmpeg"], str) else list(raw["ffmpeg"])
        if raw.get("ffprobe"):
            kwargs["ffprobe"] = shlex.split(raw["ffprobe"]) if isinstance(raw["ffprobe"], str) else list(raw["ffprobe"])
        if raw.get("max_subprocesses"):
            kwargs["max_subprocesses"] = int(raw["max_subprocesses"])
        return cls(**kwargs)


_default_config: DecoderConfig | None = None
_default_lock = threading.Lock()


def default_config() -> DecoderConfig:
    global _default_config
    with _default_lock:
        if _default_config is None:
            _default_config = DecoderConfig()
        return _default_config


def probe_streams(path: str, config: DecoderConfig | None = None) -> dict:
    """Run the probe command and return its parsed JSON."""
    config = config or default_config()
    cmd = [
        *config.ffprobe,
        "-v", "error",
        "-select_streams", "v:0",
        "-show_entries", "stream=width,height,avg_frame_rate,nb_frames,codec_name",
        "-show_entries", "format=duration",
        "-of", "json",
        path,
    ]
    with config._semaphore:
        proc = subprocess.run(cmd, capture_output=True)
    if proc.returncode != 0:
        raise DecodeError(f"probe failed for {path}", proc.stderr.decode(errors="replace"))
    try:
        info = json.loads(proc.stdout.decode())
    except json.JSONDecodeError as exc:
        raise DecodeError(f"probe emitted invalid JSON for {path}", str(exc))
    if not info.get("streams"):
        raise DecodeError(f"no video stream in {path}", proc.stderr.decode(errors="replace"))
    return info


def fetch_frame_rgb24(path: str, seek_s: float, width: int, height: int,
                      config: DecoderConfig | None = None) -> bytes:
    """Fetch one raw RGB24 frame at the given seek point."""
    config = config or default_config()
    cmd = [
        *config.ffmpeg,
        "-v", "error",
        "-ss", f"{seek_s:.6f}",
        "-i", path,
        "-frames:v", "1",
        "-f", "rawvideo",
        "-pix_fmt", "rgb24",
        "-",
    ]
    expected = width * height * 3
    with config._semaphore:
        proc = subprocess.run(cmd, capture_output=True)
    if proc.returncode != 0:
        raise DecodeError(f"frame fetch failed at t={seek_s:.3f}s", proc.stderr.decode(errors="replace"))
    if len(proc.stdout) < expected:
        raise DecodeError(
            f"frame fetch at t={seek_s:.3f}s returned {len(proc.stdout)} bytes, expected {expected}",
            proc.stderr.decode(errors="replace"),
        )
    return proc.stdout[:expected]


def fetch_frames_by_index(path: str, indices: list[int], width: int, height: int,
                          config: DecoderConfig | None = None) -> list[bytes]:
    """Fetch several exact frame indexes in one decoder pass.

    `indices` must be sorted ascending and unique; frames come back in the
    same order.
    """
    config = config or default_config()
    expression = "+".join(f"eq(n\\,{i})" for i in indices)
    cmd = [
        *config.ffmpeg,
        "-v", "error",
        "-i", path,
        "-vf", f"select={expression}",
        "-vsync", "0",
        "-frames:v", str(len(indices)),
        "-f", "rawvideo",
        "-pix_fmt", "rgb24",
        "-",
    ]
    expected = width * height * 3 * len(indices)
    with config._semaphore:
        proc = subprocess.run(cmd, capture_output=True)
    if proc.returncode != 0:
        raise DecodeError(f"frame select failed for {path}", proc.stderr.decode(errors="replace"))
    if len(proc.stdout) < expected:
        raise DecodeError(
            f"frame select returned {len(proc.stdout)} bytes, expected {expected}",
            proc.stderr.decode(errors="replace"),
        )
    frame_size = width * height * 3
    return [proc.stdout[i * frame_size:(i + 1) * frame_size]
            for i in range(len(indices))]


def stream_frames_rgb24(path: str, rate: float, n_frames: int, width: int, height: int,
                        config: DecoderConfig | None = None) -> Iterator[bytes]:
    """Stream up to n_frames raw RGB24 frames sampled at `rate` fps."""
    config = config or default_config()
    cmd = [
        *config.ffmpeg,
        "-v", "error",
        "-i", path,
        "-vf", f"fps={rate:.6f}",
        "-frames:v", str(n_frames),
        "-f", "rawvideo",
        "-pix_fmt", "rgb24",
        "-",
    ]
    frame_size = width * height * 3
    completed = False
    with config._semaphore:
        proc = subprocess.Popen(cmd, stdout=subprocess.PIPE, stderr=subprocess.PIPE)
        try:
            assert proc.stdout is not None and proc.stderr is not None
            for _ in range(n_frames):
                chunk = proc.stdout.read(frame_size)
                if not chunk:
                    break  # source shorter than requested; yield what exists
                if len(chunk) < frame_size:
                    raise DecodeError(f"stream truncated mid-frame ({len(chunk)} bytes)")
                yield chunk
            completed = True
        except GeneratorExit:
            proc.kill()  # consumer stopped early; don't block on a full pipe
            raise
        finally:
            proc.stdout.close()
            stderr = proc.stderr.read()
            proc.stderr.close()
            returncode = proc.wait()
    if completed and returncode != 0:
        raise DecodeError(f"frame stream failed for {path}", stderr.decode(errors="replace"))


def export_clip_file(path: str, out_path: str, start_s: float, duration_s: float,
                     config: DecoderConfig | None = None) -> None:
    """Write [start, start+duration) of the source as a standalone file."""
    config = config or default_config()
    cmd = [
        *config.ffmpeg,
        "-v", "error",
        "-y",
        "-ss", f"{start_s:.6f}",
        "-i", path,
        "-t", f"{duration_s:.6f}",
        "-an",
        out_path,
    ]
    with config._semaphore:
        proc = subprocess.run(cmd, capture_output=True)
    if proc.returncode != 0:
        raise DecodeError(f"clip export failed for {path}", proc.stderr.decode(errors="replace"))
