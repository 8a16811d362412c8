"""Video decoding via an external ffmpeg-compatible subprocess."""

from .decoder import DecoderConfig, default_config
from .video import (
    ClipSpec,
    FrameImage,
    VideoHandle,
    export_clip,
    extract_clips,
    frames_at,
    iter_all_frames,
    probe,
)

__all__ = [
    "ClipSpec",
    "DecoderConfig",
    "FrameImage",
    "VideoHandle",
    "default_config",
    "export_clip",
    "extract_clips",
    "frames_at",
    "iter_all_frames",
    "probe",
]
