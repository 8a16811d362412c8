"""Clients for external model servers plus the scripted offline mock."""

from .builder import BackendSet, build_backend
from .cache import CachingBackend
from .client import (
    Backend,
    HttpBackend,
    ModelRequest,
    ModelResponse,
    caption_clip,
    caption_image,
    complete_text,
)
from .config import BackendConfig, BackendsFileConfig
from .mock import MockBackend, ScriptEntry

__all__ = [
    "Backend",
    "BackendConfig",
    "BackendSet",
    "BackendsFileConfig",
    "CachingBackend",
    "HttpBackend",
    "MockBackend",
    "ModelRequest",
    "ModelResponse",
    "ScriptEntry",
    "build_backend",
    "caption_clip",
    "caption_image",
    "complete_text",
]
