"""HTTP client for OpenAI-compatible chat-completions model servers.

One request shape covers captioning LMMs, text LLMs, and the judge:

  POST {endpoint_url}
  {"model": ..., "temperature": ..., "max_tokens": ...,
   "messages": [{"role": "user", "content": [
       {"type": "text", "text": PROMPT},
       {"type": "image_url", "image_url": {"url": "data:image/png;base64,..."}}
   ]}]}

Video clips go either as multipart form uploads (fields: model, prompt,
temperature, max_tokens, file) or as a {"type": "video_path", ...} content
part, per the backend's video_transport setting. Responses must carry
choices[0].message.content; usage.total_tokens is picked up when present.

Retry policy: 429, 5xx, and timeouts are retried up to max_retries with a
1s/2s/4s backoff; other statuses surface immediately. HTTP 415 maps to
UnsupportedByServer and an OpenAI-style context_length_exceeded error maps
to ContextTooLong.
"""

from __future__ import annotations

import base64
import json
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import httpx

from ..errors import (
    BackendError,
    BackendTimeout,
    ContextTooLong,
    HttpError,
    MalformedResponse,
    RateLimited,
    UnsupportedByServer,
)
from ..media_io import FrameImage
from ..media_io.png import to_png_bytes
from .config import BackendConfig

_BACKOFF_S = (1.0, 2.0, 4.0)


@dataclass
class ModelRequest:
    prompt: str
    images_png: list[bytes] = field(default_factory=list)
    clip_path: str | None = None
    metadata: dict = field(default_factory=dict)  # video_id, frame_index, ...


@dataclass
class ModelResponse:
    text: str
    latency_ms: int
    backend_id: str
    token_usage: int | None = None
    retries: int = 0


class Backend:
    """Anything that can answer a ModelRequest."""

    config: BackendConfig

    def send(self, request: ModelRequest) -> ModelResponse:
        raise NotImplementedError

    def ping(self) -> bool:
        raise NotImplementedError

    def close(self) -> None:
        pass


def _extract_content(payload: dict) -> str:
    try:
        content = payload["choices"][0]["message"]["content"]
    except (KeyError, IndexError, TypeError):
        raise MalformedResponse(f"no assistant content in response: {str(payload)[:200]}")
    if not isinstance(content, str) or not content.strip():
        raise MalformedResponse("assistant content empty")
    return content


def _is_context_error(body: str) -> bool:
    try:
        error = json.loads(body).get("error", {})
    except (json.JSONDecodeError, AttributeError):
        return False
    code = error.get("code", "") if isinstance(error, dict) else ""
    return code == "context_length_exceeded"


class HttpBackend(Backend):
    def __init__(self, config: BackendConfig,
                 sleep: Callable[[float], None] = time.sleep,
                 transport: httpx.BaseTransport | None = None):
        self.config = config
        self._sleep = sleep
        self._semaphore = threading.BoundedSemaphore(config.max_in_flight)
        self._client = httpx.Client(timeout=config.timeout_s, transport=transport)

    def _headers(self) -> dict[str, str]:
        headers = {}
        if self.config.api_key_env:
            key = os.environ.get(self.config.api_key_env, "")
            if key:
                headers["Authorization"] = f"Bearer {key}"
        return headers

    def _post(self, request: ModelRequest) -> httpx.Response:
        cfg = self.config
        if request.clip_path and cfg.video_transport == "multipart":
            data = {
                "model": cfg.model_name,
                "prompt": request.prompt,
                "temperature": str(cfg.temperature),
            }
            if cfg.max_tokens:
                data["max_tokens"] = str(cfg.max_tokens)
            with open(request.clip_path, "rb") as fh:
                return self._client.post(
                    cfg.endpoint_url, data=data, headers=self._headers(),
                    files={"file": (Path(request.clip_path).name, fh, "video/mp4")},
                )
        content: list[dict] = [{"type": "text", "text": request.prompt}]
        for png in request.images_png:
            uri = "data:image/png;base64," + base64.b64encode(png).decode()
            content.append({"type": "image_url", "image_url": {"url": uri}})
        if request.clip_path:
            content.append({"type": "video_path", "video_path": str(request.clip_path)})
        body = {
            "model": cfg.model_name,
            "temperature": cfg.temperature,
            "messages": [{"role": "user", "content": content}],
        }
        if cfg.max_tokens:
            body["max_tokens"] = cfg.max_tokens
        return self._client.post(cfg.endpoint_url, json=body, headers=self._headers())

    def send(self, request: ModelRequest) -> ModelResponse:
        cfg = self.config
        started = time.monotonic()
        attempts = cfg.max_retries + 1
        last_error: BackendError | None = None
        with self._semaphore:
            for attempt in range(attempts):
                if attempt:
                    self._sleep(_BACKOFF_S[min(attempt - 1, len(_BACKOFF_S) - 1)])
                try:
                    response = self._post(request)
                except httpx.TimeoutException as exc:
                    last_error = BackendTimeout(f"{cfg.backend_id}: {exc}")
                    continue
                except httpx.TransportError as exc:
                    last_error = BackendError(f"{cfg.backend_id}: connection failed: {exc}")
                    continue

                status = response.status_code
                if status == 429:
                    last_error = RateLimited(response.text)
                    continue
                if status >= 500:
                    last_error = HttpError(status, response.text)
                    continue
                if status == 415:
                    raise UnsupportedByServer(f"{cfg.backend_id}: {response.text[:200]}")
                if status >= 400:
                    if _is_context_error(response.text):
                        raise ContextTooLong(f"{cfg.backend_id}: {response.text[:200]}")
                    raise HttpError(status, response.text)

                try:
                    payload = response.json()
                except json.JSONDecodeError:
                    raise MalformedResponse(f"non-JSON body: {response.text[:200]}")
                text = _extract_content(payload)
                usage = payload.get("usage", {})
                tokens = usage.get("total_tokens") if isinstance(usage, dict) else None
                return ModelResponse(
                    text=text,
                    latency_ms=int((time.monotonic() - started) * 1000),
                    backend_id=cfg.backend_id,
                    token_usage=tokens,
                    retries=attempt,
                )
        assert last_error is not None
        raise last_error

    def ping(self) -> bool:
        try:
            self._client.get(self.config.endpoint_url, timeout=2.0)
            return True  # any HTTP answer counts as reachable
        except httpx.HTTPError:
            return False

    def close(self) -> None:
        self._client.close()


def _require_kind(backend: Backend, *kinds: str) -> None:
    if backend.config.kind not in kinds:
        raise ValueError(
            f"backend {backend.config.backend_id!r} has kind {backend.config.kind!r}, "
            f"expected one of {kinds}"
        )


def caption_image(backend: Backend, frame: FrameImage, prompt: str) -> ModelResponse:
    """One chat completion embedding the frame as a base64 PNG data URI."""
    _require_kind(backend, "image_lmm")
    request = ModelRequest(
        prompt=prompt,
        images_png=[to_png_bytes(frame)],
        metadata={"frame_index": frame.frame_index, "timestamp_s": frame.timestamp_s},
    )
    return backend.send(request)


def caption_clip(backend: Backend, clip_file: str | Path, prompt: str,
                 metadata: dict | None = None) -> ModelResponse:
    """Caption one standalone clip file via the video backend."""
    _require_kind(backend, "video_lmm")
    clip_file = Path(clip_file)
    if not clip_file.exists():
        raise FileNotFoundError(clip_file)
    return backend.send(ModelRequest(prompt=prompt, clip_path=str(clip_file),
                                     metadata=metadata or {}))


def complete_text(backend: Backend, prompt: str,
                  metadata: dict | None = None) -> ModelResponse:
    """Text-only chat completion."""
    _require_kind(backend, "text_llm", "judge")
    return backend.send(ModelRequest(prompt=prompt, metadata=metadata or {}))
