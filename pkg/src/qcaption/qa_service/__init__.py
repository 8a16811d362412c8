"""Interactive REST service for video captioning and multi-turn Q&A."""

from .app import ServiceConfig, create_app
from .registry import ServiceState, Session

__all__ = ["ServiceConfig", "ServiceState", "Session", "create_app"]
