"""Deterministic scripted backend so every pipeline test runs offline.

Script files are JSONL, one entry per line:

  {"match": {"kind": "image_lmm", "prompt_contains": "...", "frame_index": 3},
   "response": "a red frame", "times": 2, "delay_ms": 0, "latency_ms": 0}

or, for failure scripting:

  {"match": {"frame_index": 5}, "error": {"status": 500}, "times": 2}
  {"match": {}, "error": {"kind": "timeout"}}

Entries are tried in file order; the first matching, non-exhausted entry
answers the request. All match fields are optional ({} matches anything).
In strict mode an unmatched request raises ScriptExhausted; otherwise the
mock echoes the prompt back.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from ..errors import BackendTimeout, HttpError, ScriptExhausted
from .client import Backend, ModelRequest, ModelResponse
from .config import BackendConfig


@dataclass
class ScriptEntry:
    match: dict = field(default_factory=dict)
    response: str | None = None
    error: dict | None = None
    times: int | None = None           # None = unlimited
    delay_ms: int = 0                  # simulated work (mock sleeps)
    latency_ms: int = 0                # reported in the ModelResponse
    used: int = 0

    def matches(self, request: ModelRequest, kind: str) -> bool:
        if self.times is not None and self.used >= self.times:
            return False
        m = self.match
        if "kind" in m and m["kind"] != kind:
            return False
        if "prompt_contains" in m and m["prompt_contains"] not in request.prompt:
            return False
        if "frame_index" in m and m["frame_index"] != request.metadata.get("frame_index"):
            return False
        return True


@dataclass
class CallRecord:
    prompt: str
    metadata: dict
    started_at: float
    finished_at: float = 0.0
    outcome: str = ""
    n_images: int = 0
    clip_path: str | None = None


class MockBackend(Backend):
    def __init__(self, kind: str, entries: list[ScriptEntry] | None = None,
                 handler: Callable[[ModelRequest], str] | None = None,
                 strict: bool = True, backend_id: str = "mock",
                 model_name: str = "mock", max_in_flight: int = 4):
        self.config = BackendConfig(
            backend_id=backend_id, kind=kind, transport="mock",
            model_name=model_name, max_in_flight=max_in_flight,
        )
        self.entries = entries or []
        self.handler = handler
        self.strict = strict
        self.calls: list[CallRecord] = []
        self._lock = threading.Lock()
        self._semaphore = threading.BoundedSemaphore(max_in_flight)

    @classmethod
    def from_script_file(cls, path: str | Path, kind: str, strict: bool = True,
                         backend_id: str = "mock") -> "MockBackend":
        entries = []
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                raw = json.loads(line)
                entries.append(ScriptEntry(
                    match=raw.get("match", {}),
                    response=raw.get("response"),
                    error=raw.get("error"),
                    times=raw.get("times"),
                    delay_ms=raw.get("delay_ms", 0),
                    latency_ms=raw.get("latency_ms", 0),
                ))
        return cls(kind=kind, entries=entries, strict=strict, backend_id=backend_id)

    def send(self, request: ModelRequest) -> ModelResponse:
        with self._semaphore:
            return self._send(request)

    def _send(self, request: ModelRequest) -> ModelResponse:
        record = CallRecord(
            prompt=request.prompt,
            metadata=dict(request.metadata),
            started_at=time.monotonic(),
            n_images=len(request.images_png),
            clip_path=request.clip_path,
        )
        with self._lock:
            self.calls.append(record)
            entry = next(
                (e for e in self.entries if e.matches(request, self.config.kind)), None)
            if entry is not None:
                entry.used += 1

        try:
            if entry is None:
                if self.handler is not None:
                    text = self.handler(request)
                elif self.strict:
                    raise ScriptExhausted(
                        f"no scripted entry for prompt {request.prompt[:80]!r} "
                        f"metadata={request.metadata}"
                    )
                else:
                    text = request.prompt  # echo
                latency = 0
            else:
                if entry.delay_ms:
                    time.sleep(entry.delay_ms / 1000)
                if entry.error is not None:
                    if entry.error.get("kind") == "timeout":
                        raise BackendTimeout(f"{self.config.backend_id}: scripted timeout")
                    raise HttpError(int(entry.error.get("status", 500)), "scripted error")
                text = entry.response if entry.response is not None else request.prompt
                latency = entry.latency_ms
            record.outcome = "ok"
            return ModelResponse(text=text, latency_ms=latency,
                                 backend_id=self.config.backend_id)
        except Exception as exc:
            record.outcome = f"error:{type(exc).__name__}"
            raise
        finally:
            record.finished_at = time.monotonic()

    def ping(self) -> bool:
        return True

    def max_concurrent_calls(self) -> int:
        """Peak overlap of in-flight calls, from the call log."""
        events = []
        for call in self.calls:
            events.append((call.started_at, 1))
            events.append((call.finished_at, -1))
        peak = current = 0
        for _, delta in sorted(events):
            current += delta
            peak = max(peak, current)
        return peak
