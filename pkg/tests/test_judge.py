"""Judge protocol: parsing, retry nudge, and aggregation arithmetic."""

import pytest

from qcaption.errors import JudgeUnparseable
from qcaption.evaluation import JudgeVerdict, aggregate_qa, judge_qa, parse_verdict
from qcaption.model_backends import MockBackend, ScriptEntry


def judge_mock(*replies):
    entries = [ScriptEntry(match={}, response=r, times=1) for r in replies]
    return MockBackend(kind="judge", entries=entries)


class TestParseVerdict:
    def test_clean_json(self):
        verdict = parse_verdict('{"pred": "yes", "score": 5}')
        assert verdict == JudgeVerdict(True, 5, '{"pred": "yes", "score": 5}')

    def test_json_embedded_in_prose(self):
        text = 'Sure! Here is my verdict: {"pred":"no","score":2} as requested.'
        verdict = parse_verdict(text)
        assert verdict.matched is False
        assert verdict.score == 2

    def test_unparseable(self):
        assert parse_verdict("maybe") is None

    def test_score_out_of_range(self):
        assert parse_verdict('{"pred": "yes", "score": 9}') is None

    def test_bad_pred(self):
        assert parse_verdict('{"pred": "perhaps", "score": 3}') is None


class TestJudgeQA:
    def test_scripted_match(self):
        backend = judge_mock('{"pred": "yes", "score": 5}')
        verdict = judge_qa("what color?", "red", "red", backend)
        assert verdict.matched and verdict.score == 5

    def test_retry_after_garbage(self):
        backend = judge_mock("maybe", '{"pred": "no", "score": 1}')
        verdict = judge_qa("q", "a", "b", backend)
        assert verdict.matched is False and verdict.score == 1
        # the second call carried the format nudge
        assert "exact format" in backend.calls[1].prompt

    def test_unparseable_twice(self):
        backend = judge_mock("maybe", "definitely maybe")
        with pytest.raises(JudgeUnparseable):
            judge_qa("q", "a", "b", backend)

    def test_prompt_carries_all_three_texts(self):
        backend = judge_mock('{"pred": "yes", "score": 4}')
        judge_qa("what is shown?", "a parade", "people marching", backend)
        prompt = backend.calls[0].prompt
        assert "what is shown?" in prompt
        assert "a parade" in prompt
        assert "people marching" in prompt


class TestAggregateQA:
    def test_worked_example(self):
        verdicts = [
            JudgeVerdict(True, 5, ""), JudgeVerdict(True, 4, ""),
            JudgeVerdict(True, 4, ""), JudgeVerdict(False, 2, ""),
            JudgeVerdict(False, 2, ""),
        ]
        summary = aggregate_qa(verdicts)
        assert summary.accuracy == pytest.approx(60.0)
        assert summary.mean_score == pytest.approx(3.4)

    def test_all_matched(self):
        summary = aggregate_qa([JudgeVerdict(True, 5, "")] * 4)
        assert summary.accuracy == 100.0
        assert summary.mean_score == 5.0

    def test_single_unmatched_zero(self):
        summary = aggregate_qa([JudgeVerdict(False, 0, "")])
        assert summary.accuracy == 0.0
        assert summary.mean_score == 0.0

    def test_permutation_invariant(self):
        verdicts = [JudgeVerdict(True, 5, ""), JudgeVerdict(False, 1, ""),
                    JudgeVerdict(True, 3, "")]
        forward = aggregate_qa(verdicts)
        backward = aggregate_qa(list(reversed(verdicts)))
        assert forward == backward

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            aggregate_qa([])
