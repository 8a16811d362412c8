"""Caption and Q&A scoring: consensus n-gram metric plus the LLM judge."""

from .cider import (
    CiderConfig,
    CiderScore,
    CorpusCiderResult,
    NGramIndex,
    build_index,
    cider,
    cider_n,
    corpus_cider,
    ngrams,
    tfidf_vector,
    tokenize,
)
from .judge import (
    DEFAULT_JUDGE_PROMPT,
    JudgeVerdict,
    QASummary,
    aggregate_qa,
    judge_qa,
    parse_verdict,
)

__all__ = [
    "CiderConfig",
    "CiderScore",
    "CorpusCiderResult",
    "DEFAULT_JUDGE_PROMPT",
    "JudgeVerdict",
    "NGramIndex",
    "QASummary",
    "aggregate_qa",
    "build_index",
    "cider",
    "cider_n",
    "corpus_cider",
    "judge_qa",
    "ngrams",
    "parse_verdict",
    "tfidf_vector",
    "tokenize",
]
