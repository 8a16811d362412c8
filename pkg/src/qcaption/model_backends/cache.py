"""Content-addressed on-disk response cache.

Keyed by hash(backend_id, model_name, kind, prompt, attachment bytes), so a
prompt change or a different frame invalidates automatically. Wraps any
backend; hits never touch the wrapped one.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .client import Backend, ModelRequest, ModelResponse


class CachingBackend(Backend):
    def __init__(self, inner: Backend, cache_dir: str | Path):
        self.inner = inner
        self.config = inner.config
        self.cache_dir = Path(cache_dir)
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0

    def _key(self, request: ModelRequest) -> str:
        h = hashlib.sha256()
        for part in (self.config.backend_id, self.config.model_name,
                     self.config.kind, request.prompt):
            h.update(part.encode())
            h.update(b"\x00")
        for png in request.images_png:
            h.update(png)
            h.update(b"\x00")
        if request.clip_path:
            h.update(Path(request.clip_path).read_bytes())
        return h.hexdigest()

    def send(self, request: ModelRequest) -> ModelResponse:
        key = self._key(request)
        path = self.cache_dir / f"{key}.json"
        if path.exists():
            self.hits += 1
            stored = json.loads(path.read_text())
            return ModelResponse(
                text=stored["text"],
                latency_ms=0,
                backend_id=self.config.backend_id,
                token_usage=stored.get("token_usage"),
            )
        self.misses += 1
        response = self.inner.send(request)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps({"text": response.text,
                                   "token_usage": response.token_usage}))
        tmp.replace(path)
        return response

    def ping(self) -> bool:
        return self.inner.ping()

    def close(self) -> None:
        self.inner.close()
