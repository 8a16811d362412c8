"""The pipeline's output document: per-frame captions, their indexed
concatenation, and the aggregated answer.

Serialization is canonical (sorted keys, compact separators) so identical
runs produce byte-identical documents.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

SCHEMA_VERSION = 1

UNAVAILABLE_TEXT = "[caption unavailable]"


@dataclass
class CaptionRecord:
    position_index: int            # temporal order, 0-based, dense
    source: dict                   # {"type": "frame", ...} or {"type": "clip", ...}
    text: str
    backend_id: str
    latency_ms: int = 0
    retries: int = 0

    def to_dict(self) -> dict:
        return {
            "position_index": self.position_index,
            "source": self.source,
            "text": self.text,
            "backend_id": self.backend_id,
            "latency_ms": self.latency_ms,
            "retries": self.retries,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "CaptionRecord":
        return cls(**raw)


@dataclass
class CaptionBundle:
    records: list[CaptionRecord]
    concatenated: str
    aggregated: str | None
    trace: dict = field(default_factory=dict)

    @property
    def answer(self) -> str:
        """What the run reports: the aggregate when the LLM stage ran,
        otherwise the naive indexed concatenation."""
        return self.aggregated if self.aggregated is not None else self.concatenated

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "records": [r.to_dict() for r in self.records],
            "concatenated": self.concatenated,
            "aggregated": self.aggregated,
            "trace": self.trace,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, raw: dict) -> "CaptionBundle":
        if raw.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported bundle schema: {raw.get('schema_version')}")
        return cls(
            records=[CaptionRecord.from_dict(r) for r in raw["records"]],
            concatenated=raw["concatenated"],
            aggregated=raw["aggregated"],
            trace=raw.get("trace", {}),
        )

    @classmethod
    def from_json(cls, text: str) -> "CaptionBundle":
        return cls.from_dict(json.loads(text))
