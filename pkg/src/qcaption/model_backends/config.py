"""Backend configuration: which model servers exist and how to talk to them."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

KINDS = ("image_lmm", "video_lmm", "text_llm", "judge")
TRANSPORTS = ("http", "mock")
VIDEO_TRANSPORTS = ("multipart", "path")


@dataclass
class BackendConfig:
    backend_id: str
    kind: str
    endpoint_url: str = ""
    model_name: str = ""
    api_key_env: str = ""
    timeout_s: float = 120.0
    max_retries: int = 2
    max_in_flight: int = 4
    temperature: float = 0.0
    max_tokens: int | None = None
    transport: str = "http"
    script_path: str = ""            # mock transport only
    strict_script: bool = True       # mock transport only
    video_transport: str = "multipart"  # video_lmm only: multipart | path

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"backend {self.backend_id!r}: unknown kind {self.kind!r}")
        if self.transport not in TRANSPORTS:
            raise ValueError(f"backend {self.backend_id!r}: unknown transport {self.transport!r}")
        if self.video_transport not in VIDEO_TRANSPORTS:
            raise ValueError(f"backend {self.backend_id!r}: unknown video_transport {self.video_transport!r}")
        if self.timeout_s <= 0:
            raise ValueError("timeout_s must be > 0")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.transport == "http" and not self.endpoint_url:
            raise ValueError(f"backend {self.backend_id!r}: http transport needs endpoint_url")


@dataclass
class BackendsFileConfig:
    """Parsed backends.json: backend configs plus cache and prompt settings."""

    backends: dict[str, BackendConfig] = field(default_factory=dict)
    prompts: dict[str, str] = field(default_factory=dict)
    cache_enabled: bool = False
    cache_dir: str = ""

    @classmethod
    def from_dict(cls, raw: dict, base_dir: Path | None = None) -> "BackendsFileConfig":
        backends = {}
        for backend_id, entry in raw.get("backends", {}).items():
            entry = dict(entry)
            script = entry.get("script_path")
            if script and base_dir is not None and not Path(script).is_absolute():
                entry["script_path"] = str(base_dir / script)
            backends[backend_id] = BackendConfig(backend_id=backend_id, **entry)
        cache = raw.get("cache", {})
        cache_dir = cache.get("dir", "")
        if cache_dir and base_dir is not None and not Path(cache_dir).is_absolute():
            cache_dir = str(base_dir / cache_dir)
        return cls(
            backends=backends,
            prompts=dict(raw.get("prompts", {})),
            cache_enabled=bool(cache.get("enabled", False)),
            cache_dir=cache_dir,
        )

    @classmethod
    def load(cls, path: str | Path) -> "BackendsFileConfig":
        path = Path(path)
        with open(path) as fh:
            raw = json.load(fh)
        return cls.from_dict(raw, base_dir=path.parent)
