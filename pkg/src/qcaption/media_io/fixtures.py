"""Synthetic labeled test videos.

Every media test runs against videos generated here, so the ground truth is
known by construction: frame at time t shows the palette color of scene
floor(t / scene_len). Files are written losslessly (FFV1 in AVI) so decoded
pixels match what was written.
"""

from __future__ import annotations

from pathlib import Path

import cv2
import numpy as np

# Mutually distant colors (RGB); scene index = palette index.
PALETTE: list[tuple[int, int, int]] = [
    (220, 30, 30),    # red
    (30, 200, 30),    # green
    (40, 60, 230),    # blue
    (235, 220, 40),   # yellow
    (220, 40, 220),   # magenta
    (40, 220, 220),   # cyan
    (245, 245, 245),  # near-white
    (235, 140, 30),   # orange
    (120, 60, 170),   # purple
    (100, 100, 100),  # gray
]


def _writer(path: Path, fps: float, width: int, height: int) -> cv2.VideoWriter:
    suffix = path.suffix.lower()
    fourcc = cv2.VideoWriter_fourcc(*("mp4v" if suffix == ".mp4" else "FFV1"))
    writer = cv2.VideoWriter(str(path), fourcc, fps, (width, height))
    if not writer.isOpened():
        raise OSError(f"cannot open video writer for {path}")
    return writer


def _scene_frame(scene: int, width: int, height: int, kind: str) -> np.ndarray:
    color = PALETTE[scene % len(PALETTE)]
    frame = np.zeros((height, width, 3), dtype=np.uint8)
    if kind == "checker":
        cell = max(2, min(width, height) // 8)
        ys, xs = np.mgrid[0:height, 0:width]
        mask = ((ys // cell) + (xs // cell)) % 2 == 0
        frame[mask] = color
    else:
        frame[:, :] = color
    return frame


def make_scene_video(path: str | Path, n_scenes: int = 8, scene_len_s: float = 1.0,
                     fps: float = 10.0, width: int = 64, height: int = 64,
                     kind: str = "solid") -> Path:
    """Video of n_scenes blocks, each scene_len_s long, one palette color per
    scene. `kind` is "solid" or "checker"."""
    path = Path(path)
    writer = _writer(path, fps, width, height)
    try:
        frames_per_scene = round(scene_len_s * fps)
        for scene in range(n_scenes):
            rgb = _scene_frame(scene, width, height, kind)
            bgr = rgb[:, :, ::-1].copy()
            for _ in range(frames_per_scene):
                writer.write(bgr)
    finally:
        writer.release()
    return path


def make_constant_video(path: str | Path, duration_s: float, fps: float = 10.0,
                        width: int = 64, height: int = 64,
                        color: tuple[int, int, int] = (90, 130, 200)) -> Path:
    """Every frame identical; defeats difference-based candidate filtering."""
    path = Path(path)
    writer = _writer(path, fps, width, height)
    try:
        frame = np.full((height, width, 3), color[::-1], dtype=np.uint8)
        for _ in range(round(duration_s * fps)):
            writer.write(frame)
    finally:
        writer.release()
    return path


def nearest_palette_index(mean_rgb) -> int:
    """Which palette entry a decoded frame's mean color is closest to."""
    mean = np.asarray(mean_rgb, dtype=float)
    distances = [np.linalg.norm(mean - np.array(c, dtype=float)) for c in PALETTE]
    return int(np.argmin(distances))


def scene_of_frame(frame) -> int:
    """Scene label of a FrameImage decoded from a palette fixture."""
    return nearest_palette_index(frame.to_array().reshape(-1, 3).mean(axis=0))
