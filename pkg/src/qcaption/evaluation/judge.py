"""LLM-judge grading of predicted answers against ground truth.

The judge sees the question, the correct answer, and the prediction, and
must reply with a JSON object carrying a yes/no match and an integer score
from 0 to 5 (correctness, detail, and contextual fit rolled into one grade).
Replies are parsed by extracting the first JSON object; one retry with a
format nudge is allowed before giving up.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from ..errors import JudgeUnparseable
from ..fusion_pipeline.prompts import render
from ..model_backends import Backend, complete_text

DEFAULT_JUDGE_PROMPT = (
    "You are evaluating a video question-answering system. Judge whether the "
    "predicted answer matches the correct answer for the question, considering "
    "correctness of information, level of detail, and contextual understanding.\n"
    "Question: {question}\n"
    "Correct answer: {answer}\n"
    "Predicted answer: {prediction}\n"
    'Reply with only a JSON object of the form {"pred": "yes" or "no", '
    '"score": integer 0-5} and nothing else.'
)

_FORMAT_NUDGE = (
    '\nYour previous reply could not be parsed. Reply in the exact format '
    '{"pred": "yes", "score": 3} with no other text.'
)


@dataclass(frozen=True)
class JudgeVerdict:
    matched: bool
    score: int
    raw_text: str

    def to_dict(self) -> dict:
        return {"matched": self.matched, "score": self.score, "raw_text": self.raw_text}

    @classmethod
    def from_dict(cls, raw: dict) -> "JudgeVerdict":
        return cls(matched=raw["matched"], score=raw["score"], raw_text=raw["raw_text"])


def _first_json_object(text: str) -> dict | None:
    decoder = json.JSONDecoder()
    for start, char in enumerate(text):
        if char != "{":
            continue
        try:
            obj, _ = decoder.raw_decode(text[start:])
        except json.JSONDecodeError:
            continue
        if isinstance(obj, dict):
            return obj
    return None


def parse_verdict(text: str) -> JudgeVerdict | None:
    """Extract a verdict from a judge reply, or None when unparseable."""
    obj = _first_json_object(text)
    if obj is None:
        return None
    pred = str(obj.get("pred", "")).strip().lower()
    if pred not in ("yes", "no"):
        return None
    score = obj.get("score")
    if isinstance(score, bool) or not isinstance(score, (int, float)):
        return None
    score = int(score)
    if not 0 <= score <= 5:
        return None
    return JudgeVerdict(matched=(pred == "yes"), score=score, raw_text=text)


def judge_qa(question: str, ground_truth: str, prediction: str,
             judge_backend: Backend, template: str = DEFAULT_JUDGE_PROMPT) -> JudgeVerdict:
    """Grade one prediction; retries once with a format nudge on parse failure."""
    prompt = render(template, question=question, answer=ground_truth,
                    prediction=prediction)
    reply = complete_text(judge_backend, prompt)
    verdict = parse_verdict(reply.text)
    if verdict is not None:
        return verdict
    retry = complete_text(judge_backend, prompt + _FORMAT_NUDGE)
    verdict = parse_verdict(retry.text)
    if verdict is not None:
        return verdict
    raise JudgeUnparseable(
        f"judge replies unparseable: {reply.text[:120]!r} then {retry.text[:120]!r}"
    )


@dataclass(frozen=True)
class QASummary:
    accuracy: float      # percent matched, 0-100
    mean_score: float


def aggregate_qa(verdicts: Sequence[JudgeVerdict]) -> QASummary:
    """Accuracy (x100, mirroring benchmark tables) and mean score."""
    if not verdicts:
        raise ValueError("no verdicts to aggregate")
    matched = sum(1 for v in verdicts if v.matched)
    return QASummary(
        accuracy=100.0 * matched / len(verdicts),
        mean_score=sum(v.score for v in verdicts) / len(verdicts),
    )
