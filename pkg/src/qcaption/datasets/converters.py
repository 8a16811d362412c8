"""Benchmark-annotation converters to the normalized manifest format.

Input shapes:

  cooking-procedure style: {"database": {video_id: {"annotations":
      [{"segment": [start, end], "sentence": str}, ...], ...}, ...}}
  web-clip style: {"videos": [{"video_id": str, ...}],
      "sentences": [{"video_id": str, "caption": str}, ...]}
  activity QA: questions [{"question_id", "video_name", "question"}] joined
      to answers [{"question_id", "answer"}] by question id.

Converters are deterministic: tasks come out sorted by video_id (and
question id for QA).
"""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import MissingVideo, SchemaError, UnmatchedQuestionId
from .manifest import CaptionTask, Manifest, QATask

_VIDEO_EXTENSIONS = (".mp4", ".avi", ".mkv", ".webm", ".mov")


def _load_json(path: str | Path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON: {exc}")


def _resolve_video(video_dir: Path, video_id: str, strict: bool,
                   manifest: Manifest) -> str | None:
    for ext in _VIDEO_EXTENSIONS:
        candidate = video_dir / f"{video_id}{ext}"
        if candidate.exists():
            return str(candidate)
    if strict:
        raise MissingVideo(f"no video file for {video_id!r} under {video_dir}")
    manifest.violations.append(f"missing video file for {video_id}")
    return str(video_dir / f"{video_id}.mp4")


def convert_youcook2(annotation_file: str | Path, video_dir: str | Path,
                     strict: bool = True) -> Manifest:
    """One caption task per video; the reference is the video's procedure
    sentences joined in segment order."""
    raw = _load_json(annotation_file)
    database = raw.get("database")
    if not isinstance(database, dict):
        raise SchemaError(f"{annotation_file}: expected a top-level 'database' object")
    video_dir = Path(video_dir)
    manifest = Manifest(kind="caption", source=Path(annotation_file).name)
    for video_id in sorted(database):
        entry = database[video_id]
        annotations = entry.get("annotations") or []
        sentences = []
        for segment in sorted(annotations, key=lambda s: s.get("segment", [0])[0]):
            sentence = str(segment.get("sentence", "")).strip()
            if sentence:
                sentences.append(sentence)
        if not sentences:
            manifest.violations.append(f"{video_id}: no annotated segments, excluded")
            continue
        video_path = _resolve_video(video_dir, video_id, strict, manifest)
        manifest.tasks.append(CaptionTask(
            video_id=video_id, video_path=video_path,
            references=(" ".join(sentences),),
        ))
    return manifest


def convert_msrvtt(annotation_file: str | Path, video_dir: str | Path,
                   strict: bool = True) -> Manifest:
    """One caption task per video with every caption sentence as a separate
    reference. Duplicate captions are kept: multiplicity matters to a
    consensus metric. Empty captions are dropped."""
    raw = _load_json(annotation_file)
    if "videos" not in raw or "sentences" not in raw:
        raise SchemaError(f"{annotation_file}: expected 'videos' and 'sentences' lists")
    video_dir = Path(video_dir)
    manifest = Manifest(kind="caption", source=Path(annotation_file).name)
    captions: dict[str, list[str]] = {v["video_id"]: [] for v in raw["videos"]}
    for sentence in raw["sentences"]:
        video_id = sentence.get("video_id")
        caption = str(sentence.get("caption", "")).strip()
        if video_id in captions and caption:
            captions[video_id].append(caption)
    for video_id in sorted(captions):
        refs = captions[video_id]
        if not refs:
            manifest.violations.append(f"{video_id}: no captions, excluded")
            continue
        video_path = _resolve_video(video_dir, video_id, strict, manifest)
        manifest.tasks.append(CaptionTask(
            video_id=video_id, video_path=video_path, references=tuple(refs),
        ))
    return manifest


def convert_activitynet_qa(question_file: str | Path, answer_file: str | Path,
                           video_dir: str | Path, strict: bool = True) -> Manifest:
    """One QA task per (video, question), joining questions to answers by
    question id."""
    questions = _load_json(question_file)
    answers = _load_json(answer_file)
    if not isinstance(questions, list) or not isinstance(answers, list):
        raise SchemaError("question and answer files must be JSON lists")
    answer_by_id = {}
    for entry in answers:
        answer_by_id[str(entry.get("question_id"))] = str(entry.get("answer", ""))
    video_dir = Path(video_dir)
    manifest = Manifest(kind="qa", source=Path(question_file).name)
    resolved_paths: dict[str, str] = {}
    rows = []
    for entry in questions:
        qid = str(entry.get("question_id"))
        video_id = str(entry.get("video_name", "")).strip()
        question = str(entry.get("question", "")).strip()
        if not video_id or not question:
            raise SchemaError(f"question {qid}: missing video_name or question")
        if qid not in answer_by_id:
            raise UnmatchedQuestionId(f"question id {qid} has no answer")
        answer = answer_by_id[qid].strip()
        if not answer:
            raise SchemaError(f"question {qid}: whitespace-only answer")
        rows.append((video_id, qid, question, answer))
    for video_id, qid, question, answer in sorted(rows):
        if video_id not in resolved_paths:
            resolved_paths[video_id] = _resolve_video(video_dir, video_id, strict, manifest)
        manifest.tasks.append(QATask(
            video_id=video_id, video_path=resolved_paths[video_id],
            question=question, answer=answer,
        ))
    return manifest
