"""Late-fusion captioning pipeline: select, caption, concatenate, aggregate."""

from .bundle import UNAVAILABLE_TEXT, CaptionBundle, CaptionRecord
from .pipeline import (
    PipelineConfig,
    aggregate_captions,
    caption_frames,
    concat_with_indexes,
    run_multiclips,
    run_pipeline,
    run_task,
)
from .prompts import DEFAULT_PROMPTS, prompt_defaults, render

__all__ = [
    "CaptionBundle",
    "CaptionRecord",
    "DEFAULT_PROMPTS",
    "PipelineConfig",
    "UNAVAILABLE_TEXT",
    "aggregate_captions",
    "caption_frames",
    "concat_with_indexes",
    "prompt_defaults",
    "render",
    "run_multiclips",
    "run_pipeline",
    "run_task",
]
