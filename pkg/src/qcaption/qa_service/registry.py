"""In-memory service state: registered videos, frame selections, sessions,
bundles, and background caption jobs.

Sessions are append-only and bounded; a per-session lock serializes asks so
concurrent requests to one session cannot interleave history."""

from __future__ import annotations

import hashlib
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from ..frame_selection import KeyframeSet
from ..fusion_pipeline import CaptionRecord
from ..media_io import VideoHandle


@dataclass
class RegisteredVideo:
    video_id: str
    handle: VideoHandle
    selections: dict[tuple, KeyframeSet] = field(default_factory=dict)
    current_selection: KeyframeSet | None = None


@dataclass
class SessionTurn:
    question: str
    answer: str
    bundle_ref: str


@dataclass
class Session:
    session_id: str
    video_id: str
    turns: list[SessionTurn] = field(default_factory=list)
    cached_records: list[CaptionRecord] | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)


class ServiceState:
    def __init__(self):
        self.videos: dict[str, RegisteredVideo] = {}
        self.sessions: dict[str, Session] = {}
        self.bundles: dict[str, dict] = {}
        self.jobs: dict[str, dict] = {}
        self._lock = threading.Lock()

    # -- videos ------------------------------------------------------------

    def video_id_for(self, path: Path) -> str:
        h = hashlib.sha256()
        with open(path, "rb") as fh:
            for chunk in iter(lambda: fh.read(1 << 20), b""):
                h.update(chunk)
        return h.hexdigest()[:12]

    def add_video(self, video_id: str, handle: VideoHandle) -> RegisteredVideo:
        with self._lock:
            if video_id not in self.videos:
                self.videos[video_id] = RegisteredVideo(video_id=video_id, handle=handle)
            return self.videos[video_id]

    def get_video(self, video_id: str) -> RegisteredVideo | None:
        return self.videos.get(video_id)

    # -- sessions ----------------------------------------------------------

    def create_session(self, video_id: str) -> Session:
        session = Session(session_id=uuid.uuid4().hex, video_id=video_id)
        with self._lock:
            self.sessions[session.session_id] = session
        return session

    def get_session(self, session_id: str) -> Session | None:
        return self.sessions.get(session_id)

    # -- bundles and jobs ----------------------------------------------------

    def store_bundle(self, bundle_dict: dict) -> str:
        bundle_id = uuid.uuid4().hex
        with self._lock:
            self.bundles[bundle_id] = bundle_dict
        return bundle_id

    def create_job(self) -> str:
        job_id = uuid.uuid4().hex
        with self._lock:
            self.jobs[job_id] = {"status": "pending"}
        return job_id

    def finish_job(self, job_id: str, bundle: dict | None = None,
                   error: str | None = None) -> None:
        with self._lock:
            if error is not None:
                self.jobs[job_id] = {"status": "error", "error": error}
            else:
                self.jobs[job_id] = {"status": "done", "bundle": bundle}
