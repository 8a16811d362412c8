"""Three-stage late fusion: select frames, caption each with the image
backend under one constant prompt, concatenate with temporal indexes, and
aggregate with the text backend.

Stage 2 runs concurrently up to the backend's in-flight bound; assembly is
an ordered join on position index, so output is deterministic regardless of
completion order or worker count. A frame whose captioning fails after the
client's retries degrades to a placeholder record instead of aborting the
run; only a run where every frame fails raises.
"""

from __future__ import annotations

import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import AllFramesFailed, BackendError
from ..frame_selection import KeyframeSet, select_frames
from ..media_io import VideoHandle, extract_clips, export_clip, probe
from ..model_backends import BackendSet, caption_clip, caption_image, complete_text
from .bundle import UNAVAILABLE_TEXT, CaptionBundle, CaptionRecord
from .prompts import DEFAULT_PROMPTS, render

PIPELINE_STRATEGIES = ("katna", "regular", "random", "first_n", "single", "multiclips")

MULTICLIP_COUNT = 4
MULTICLIP_LEN_S = 5.0


@dataclass
class PipelineConfig:
    strategy: str = "katna"
    n_frames: int = 8
    frame_prompt: str | None = None        # None = default for task_kind
    aggregation_prompt: str | None = None
    use_llm: bool = True
    seed: int = 0
    task_kind: str = "caption"             # caption | qa
    question: str | None = None
    max_workers: int = 4
    strategy_params: dict = field(default_factory=dict)
    prompt_overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.strategy not in PIPELINE_STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.n_frames < 1:
            raise ValueError("n_frames must be >= 1")
        if self.task_kind not in ("caption", "qa"):
            raise ValueError(f"task_kind must be caption or qa, got {self.task_kind!r}")

    def resolved_frame_prompt(self) -> str:
        template = self.frame_prompt
        if template is None:
            key = "frame_qa" if self.task_kind == "qa" else "frame_caption"
            template = self.prompt_overrides.get(key, DEFAULT_PROMPTS[key])
        return render(template, question=self.question)

    def aggregation_template(self) -> str:
        if self.aggregation_prompt is not None:
            return self.aggregation_prompt
        key = "aggregate_qa" if self.task_kind == "qa" else "aggregate_caption"
        return self.prompt_overrides.get(key, DEFAULT_PROMPTS[key])


def caption_frames(frames: KeyframeSet | list, frame_prompt: str, backend,
                   max_workers: int = 4) -> tuple[list[CaptionRecord], list[dict]]:
    """Caption every frame with the same prompt; temporal order preserved.

    Returns (records, errors); failed frames get placeholder records and an
    entry in errors. Raises AllFramesFailed if nothing succeeded.
    """
    frame_list = frames.frames if isinstance(frames, KeyframeSet) else list(frames)
    if not frame_list:
        raise ValueError("no frames to caption")

    def work(frame):
        return caption_image(backend, frame, frame_prompt)

    records: list[CaptionRecord] = []
    errors: list[dict] = []
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        futures = [pool.submit(work, f) for f in frame_list]
        for position, (frame, future) in enumerate(zip(frame_list, futures)):
            source = {"type": "frame", "frame_index": frame.frame_index,
                      "timestamp_s": frame.timestamp_s}
            try:
                response = future.result()
                records.append(CaptionRecord(
                    position_index=position, source=source, text=response.text,
                    backend_id=response.backend_id, latency_ms=response.latency_ms,
                    retries=response.retries,
                ))
            except BackendError as exc:
                errors.append({"position_index": position,
                               "frame_index": frame.frame_index,
                               "error": f"{type(exc).__name__}: {exc}"})
                records.append(CaptionRecord(
                    position_index=position, source=source, text=UNAVAILABLE_TEXT,
                    backend_id=backend.config.backend_id,
                ))
    if len(errors) == len(frame_list):
        raise AllFramesFailed(f"all {len(frame_list)} frame captions failed")
    return records, errors


def concat_with_indexes(records: list[CaptionRecord]) -> str:
    """Render records as "{i}: {text}" lines joined by single newlines.
    Inner newlines in a caption are flattened to spaces."""
    lines = []
    for record in records:
        text = " ".join(record.text.splitlines())
        lines.append(f"{record.position_index}: {text}")
    return "\n".join(lines)


def aggregate_captions(concatenated: str, aggregation_template: str, backend,
                       question: str | None = None):
    """Render the aggregation prompt and run one text completion."""
    if not concatenated:
        raise ValueError("nothing to aggregate: concatenated captions are empty")
    prompt = render(aggregation_template, captions=concatenated, question=question)
    return complete_text(backend, prompt)


def _finish_bundle(records, errors, config: PipelineConfig, backends: BackendSet,
                   trace: dict) -> CaptionBundle:
    concatenated = concat_with_indexes(records)
    aggregated = None
    if config.use_llm:
        response = aggregate_captions(concatenated, config.aggregation_template(),
                                      backends.require("text_llm"),
                                      question=config.question)
        aggregated = response.text
        trace["aggregation"] = {"backend_id": response.backend_id,
                                "latency_ms": response.latency_ms,
                                "retries": response.retries}
    trace["frame_errors"] = errors
    return CaptionBundle(records=records, concatenated=concatenated,
                         aggregated=aggregated, trace=trace)


def _check_question(config: PipelineConfig) -> None:
    if config.task_kind == "qa" and not config.question:
        raise ValueError("qa tasks require a question")


def run_pipeline(video: VideoHandle | str | Path, config: PipelineConfig,
                 backends: BackendSet) -> CaptionBundle:
    """Frame-based strategies; use run_multiclips for clip fusion."""
    if config.strategy == "multiclips":
        raise ValueError("run_pipeline does not handle multiclips")
    _check_question(config)
    handle = video if isinstance(video, VideoHandle) else probe(video)
    selection = select_frames(handle, config.strategy, config.n_frames,
                              seed=config.seed, **config.strategy_params)
    frame_prompt = config.resolved_frame_prompt()
    records, errors = caption_frames(selection, frame_prompt,
                                     backends.require("image_lmm"),
                                     max_workers=config.max_workers)
    trace = {
        "video": str(handle.path),
        "strategy": selection.strategy,
        "strategy_params": selection.params,
        "seed": config.seed,
        "task_kind": config.task_kind,
        "question": config.question,
        "frame_prompt": frame_prompt,
        "aggregation_template": config.aggregation_template() if config.use_llm else None,
        "selection_trace": selection.trace,
    }
    return _finish_bundle(records, errors, config, backends, trace)


def run_multiclips(video: VideoHandle | str | Path, config: PipelineConfig,
                   backends: BackendSet) -> CaptionBundle:
    """Clip fusion: four 5-second clips at regular intervals, each captioned
    by the video backend, then aggregated like the frame pipeline."""
    _check_question(config)
    handle = video if isinstance(video, VideoHandle) else probe(video)
    clips = extract_clips(handle, MULTICLIP_COUNT, MULTICLIP_LEN_S)
    frame_prompt = config.resolved_frame_prompt()
    backend = backends.require("video_lmm")

    records: list[CaptionRecord] = []
    errors: list[dict] = []
    with tempfile.TemporaryDirectory(prefix="qcaption-clips-") as tmp:
        paths = []
        for i, clip in enumerate(clips):
            out = Path(tmp) / f"clip_{i}{handle.path.suffix or '.avi'}"
            export_clip(handle, clip, out)
            paths.append(out)

        def work(item):
            i, path = item
            return caption_clip(backend, path, frame_prompt,
                                metadata={"clip_index": i})

        with ThreadPoolExecutor(max_workers=config.max_workers) as pool:
            futures = [pool.submit(work, (i, p)) for i, p in enumerate(paths)]
            for position, (clip, future) in enumerate(zip(clips, futures)):
                source = {"type": "clip", "start_s": clip.start_s, "end_s": clip.end_s}
                try:
                    response = future.result()
                    records.append(CaptionRecord(
                        position_index=position, source=source, text=response.text,
                        backend_id=response.backend_id, latency_ms=response.latency_ms,
                        retries=response.retries,
                    ))
                except BackendError as exc:
                    errors.append({"position_index": position,
                                   "error": f"{type(exc).__name__}: {exc}"})
                    records.append(CaptionRecord(
                        position_index=position, source=source,
                        text=UNAVAILABLE_TEXT, backend_id=backend.config.backend_id,
                    ))
    if len(errors) == len(records):
        raise AllFramesFailed(f"all {len(records)} clip captions failed")

    trace = {
        "video": str(handle.path),
        "strategy": "multiclips",
        "strategy_params": {"n_clips": MULTICLIP_COUNT, "clip_len_s": MULTICLIP_LEN_S},
        "seed": config.seed,
        "task_kind": config.task_kind,
        "question": config.question,
        "frame_prompt": frame_prompt,
        "aggregation_template": config.aggregation_template() if config.use_llm else None,
        "clips": [{"start_s": c.start_s, "end_s": c.end_s} for c in clips],
    }
    return _finish_bundle(records, errors, config, backends, trace)


def run_task(video: VideoHandle | str | Path, config: PipelineConfig,
             backends: BackendSet) -> CaptionBundle:
    """Dispatch to the frame pipeline or the multiclips variant."""
    if config.strategy == "multiclips":
        return run_multiclips(video, config, backends)
    return run_pipeline(video, config, backends)
