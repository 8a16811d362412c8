"""Benchmark data normalized into JSONL manifests."""

from .converters import convert_activitynet_qa, convert_msrvtt, convert_youcook2
from .manifest import CaptionTask, Manifest, QATask, load_manifest, write_manifest

__all__ = [
    "CaptionTask",
    "Manifest",
    "QATask",
    "convert_activitynet_qa",
    "convert_msrvtt",
    "convert_youcook2",
    "load_manifest",
    "write_manifest",
]
