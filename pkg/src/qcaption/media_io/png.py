"""PNG encoding for decoded frames (deterministic for identical pixels)."""

from __future__ import annotations

import io
from pathlib import Path

from PIL import Image

from .video import FrameImage


def to_png_bytes(frame: FrameImage) -> bytes:
    image = Image.frombytes("RGB", (frame.width, frame.height), frame.pixels)
    buffer = io.BytesIO()
    image.save(buffer, format="PNG")
    return buffer.getvalue()


def write_png(frame: FrameImage, path: str | Path) -> Path:
    path = Path(path)
    path.write_bytes(to_png_bytes(frame))
    return path
