"""Normalized task manifests.

One JSONL line per task:

  caption: {"video_id": str, "video_path": str, "references": [str, ...]}
  qa:      {"video_id": str, "video_path": str, "question": str, "answer": str}

(video_id, question) keys are unique within a manifest. Strict loading fails
on the first violation; lenient loading skips bad lines and keeps tasks with
missing video files, collecting everything in the manifest's violation list.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

from ..errors import DuplicateKey, MissingVideo, SchemaError

KINDS = ("caption", "qa")


@dataclass(frozen=True)
class CaptionTask:
    video_id: str
    video_path: str
    references: tuple[str, ...]

    @property
    def key(self) -> tuple[str, str | None]:
        return (self.video_id, None)

    def to_dict(self) -> dict:
        return {"video_id": self.video_id, "video_path": self.video_path,
                "references": list(self.references)}


@dataclass(frozen=True)
class QATask:
    video_id: str
    video_path: str
    question: str
    answer: str

    @property
    def key(self) -> tuple[str, str | None]:
        return (self.video_id, self.question)

    def to_dict(self) -> dict:
        return {"video_id": self.video_id, "video_path": self.video_path,
                "question": self.question, "answer": self.answer}


Task = Union[CaptionTask, QATask]


@dataclass
class Manifest:
    kind: str
    tasks: list[Task] = field(default_factory=list)
    source: str = ""
    violations: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"manifest kind must be one of {KINDS}, got {self.kind!r}")


def _parse_caption_line(raw: dict, line: int) -> CaptionTask:
    for key in ("video_id", "video_path", "references"):
        if key not in raw:
            raise SchemaError(f"missing field {key!r}", line)
    refs = raw["references"]
    if not isinstance(refs, list) or not refs or not all(isinstance(r, str) and r.strip() for r in refs):
        raise SchemaError("references must be a non-empty list of non-empty strings", line)
    if not str(raw["video_id"]).strip():
        raise SchemaError("video_id must be non-empty", line)
    return CaptionTask(video_id=raw["video_id"], video_path=raw["video_path"],
                       references=tuple(refs))


def _parse_qa_line(raw: dict, line: int) -> QATask:
    for key in ("video_id", "video_path", "question", "answer"):
        if key not in raw:
            raise SchemaError(f"missing field {key!r}", line)
    if not str(raw["question"]).strip():
        raise SchemaError("question must be non-empty", line)
    if not str(raw["answer"]).strip():
        raise SchemaError("answer must be non-empty", line)
    if not str(raw["video_id"]).strip():
        raise SchemaError("video_id must be non-empty", line)
    return QATask(video_id=raw["video_id"], video_path=raw["video_path"],
                  question=raw["question"], answer=raw["answer"])


def load_manifest(path: str | Path, kind: str, strict: bool = True,
                  check_videos: bool = True) -> Manifest:
    path = Path(path)
    manifest = Manifest(kind=kind, source=path.name)
    seen: set[tuple[str, str | None]] = set()
    parse = _parse_caption_line if kind == "caption" else _parse_qa_line
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                try:
                    raw = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise SchemaError(f"invalid JSON: {exc}", line_no)
                if not isinstance(raw, dict):
                    raise SchemaError("line is not a JSON object", line_no)
                task = parse(raw, line_no)
                if task.key in seen:
                    raise DuplicateKey(f"duplicate task key {task.key}", line_no)
                missing = not Path(task.video_path).exists()
                if missing and strict and check_videos:
                    raise MissingVideo(f"video file not found: {task.video_path}", line_no)
                seen.add(task.key)
                manifest.tasks.append(task)
                if missing:
                    manifest.violations.append(
                        f"line {line_no}: video file not found: {task.video_path}")
            except SchemaError:
                if strict:
                    raise
                manifest.violations.append(f"line {line_no}: skipped: {line[:120]}")
    return manifest


def write_manifest(manifest: Manifest, path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w") as fh:
        for task in manifest.tasks:
            fh.write(json.dumps(task.to_dict(), sort_keys=True) + "\n")
    return path
