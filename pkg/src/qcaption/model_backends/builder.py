"""Construct live backends from config, one per role."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .cache import CachingBackend
from .client import Backend, HttpBackend
from .config import BackendConfig, BackendsFileConfig
from .mock import MockBackend


def build_backend(cfg: BackendConfig) -> Backend:
    if cfg.transport == "mock":
        if cfg.script_path:
            return MockBackend.from_script_file(
                cfg.script_path, kind=cfg.kind, strict=cfg.strict_script,
                backend_id=cfg.backend_id,
            )
        return MockBackend(kind=cfg.kind, strict=False, backend_id=cfg.backend_id,
                           max_in_flight=cfg.max_in_flight)
    return HttpBackend(cfg)


@dataclass
class BackendSet:
    """At most one backend per role; pipelines ask for what they need."""

    image_lmm: Backend | None = None
    video_lmm: Backend | None = None
    text_llm: Backend | None = None
    judge: Backend | None = None

    def get(self, kind: str) -> Backend | None:
        return getattr(self, kind)

    def require(self, kind: str) -> Backend:
        backend = self.get(kind)
        if backend is None:
            raise ValueError(f"no backend configured for role {kind!r}")
        return backend

    def all(self) -> list[Backend]:
        return [b for b in (self.image_lmm, self.video_lmm, self.text_llm, self.judge)
                if b is not None]

    def close(self) -> None:
        for backend in self.all():
            backend.close()

    @classmethod
    def from_backends(cls, backends: dict[str, Backend]) -> "BackendSet":
        out = cls()
        for backend in backends.values():
            kind = backend.config.kind
            if out.get(kind) is not None:
                raise ValueError(f"two backends configured for role {kind!r}")
            setattr(out, kind, backend)
        return out

    @classmethod
    def from_file_config(cls, file_config: BackendsFileConfig,
                         use_cache: bool | None = None,
                         cache_dir: str | Path | None = None) -> "BackendSet":
        enabled = file_config.cache_enabled if use_cache is None else use_cache
        directory = cache_dir or file_config.cache_dir
        backends: dict[str, Backend] = {}
        for backend_id, cfg in file_config.backends.items():
            backend = build_backend(cfg)
            if enabled and directory:
                backend = CachingBackend(backend, directory)
            backends[backend_id] = backend
        return cls.from_backends(backends)

    @classmethod
    def from_config_file(cls, path: str | Path, use_cache: bool | None = None,
                         cache_dir: str | Path | None = None) -> "BackendSet":
        return cls.from_file_config(BackendsFileConfig.load(path),
                                    use_cache=use_cache, cache_dir=cache_dir)
