"""Consensus-based caption metric over TF-IDF n-gram vectors.

A candidate caption is scored against a video's reference set by cosine
similarity of TF-IDF weighted n-gram vectors (n = 1..4), averaged over the
references and summed over n with uniform weights. Document frequencies are
computed per *video*: an n-gram counts once per video no matter how many of
that video's references contain it.

Conventions pinned here (the metric is undefined without them):
- tokenizer: lowercase, punctuation replaced by spaces, whitespace split;
- TF denominator: the caption's total n-gram count at that order;
- candidate n-grams absent from every reference get idf = log(corpus_size),
  contributing to the candidate norm only;
- cosine with a zero-norm side is 0;
- raw scores live in [0, sum(weights)]; reports also carry raw * report_scale.
"""

from __future__ import annotations

import math
import string
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..errors import EmptyCorpus

MAX_NGRAM_ORDER = 4

_PUNCT_TO_SPACE = str.maketrans({c: " " for c in string.punctuation})

NGram = tuple[str, ...]


def tokenize(text: str) -> list[str]:
    """Lowercase, strip punctuation to spaces, split on whitespace."""
    return text.lower().translate(_PUNCT_TO_SPACE).split()


def ngrams(tokens: Sequence[str], n: int) -> Counter[NGram]:
    """All contiguous n-token windows with multiplicity."""
    if not 1 <= n <= MAX_NGRAM_ORDER:
        raise ValueError(f"n must be in 1..{MAX_NGRAM_ORDER}, got {n}")
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


@dataclass
class NGramIndex:
    """Reference-corpus vocabulary with per-video document frequencies.

    document_frequency[n-1][gram] = number of videos whose reference set
    contains `gram` in at least one reference. Built from references only,
    never from candidates.
    """

    corpus_size: int
    document_frequency: list[dict[NGram, int]]
    max_n: int = MAX_NGRAM_ORDER

    def idf(self, gram: NGram) -> float:
        """log(corpus_size / df); unseen grams are treated as df = 1."""
        df = self.document_frequency[len(gram) - 1].get(gram, 1)
        return math.log(self.corpus_size / df)


def build_index(references: Sequence[Sequence[str]]) -> NGramIndex:
    """Index a corpus given per-video lists of reference captions."""
    if not references:
        raise EmptyCorpus("cannot build an n-gram index over zero videos")
    dfs: list[dict[NGram, int]] = [{} for _ in range(MAX_NGRAM_ORDER)]
    for refs in references:
        if not refs:
            raise EmptyCorpus("every video needs at least one reference")
        for n in range(1, MAX_NGRAM_ORDER + 1):
            seen: set[NGram] = set()
            for ref in refs:
                seen.update(ngrams(tokenize(ref), n))
            df = dfs[n - 1]
            for gram in seen:
                df[gram] = df.get(gram, 0) + 1
    return NGramIndex(corpus_size=len(references), document_frequency=dfs)


def tfidf_vector(caption: str, n: int, index: NGramIndex) -> dict[NGram, float]:
    """Sparse TF-IDF vector of the caption's order-n n-grams."""
    counts = ngrams(tokenize(caption), n)
    total = sum(counts.values())
    if total == 0:
        return {}
    return {gram: (h / total) * index.idf(gram) for gram, h in counts.items()}


def _cosine(a: dict[NGram, float], b: dict[NGram, float]) -> float:
    norm_a = math.sqrt(sum(v * v for v in a.values()))
    norm_b = math.sqrt(sum(v * v for v in b.values()))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    if len(b) < len(a):
        a, b = b, a
    dot = sum(v * b.get(gram, 0.0) for gram, v in a.items())
    return dot / (norm_a * norm_b)


def cider_n(candidate: str, refs: Sequence[str], n: int, index: NGramIndex) -> float:
    """Mean cosine similarity at one n-gram order."""
    if not refs:
        raise ValueError("reference set must be non-empty")
    cand_vec = tfidf_vector(candidate, n, index)
    return sum(_cosine(cand_vec, tfidf_vector(r, n, index)) for r in refs) / len(refs)


@dataclass(frozen=True)
class CiderConfig:
    weights: tuple[float, float, float, float] = (0.25, 0.25, 0.25, 0.25)
    report_scale: float = 100.0


@dataclass(frozen=True)
class CiderScore:
    raw: float
    scaled: float


def cider(candidate: str, refs: Sequence[str], index: NGramIndex,
          cfg: CiderConfig | None = None) -> CiderScore:
    """Weighted sum over n-gram orders; raw plus display-scaled value."""
    cfg = cfg or CiderConfig()
    raw = sum(
        w * cider_n(candidate, refs, n, index)
        for n, w in zip(range(1, MAX_NGRAM_ORDER + 1), cfg.weights)
    )
    return CiderScore(raw=raw, scaled=raw * cfg.report_scale)


@dataclass
class CorpusCiderResult:
    """Corpus mean with the per-video scores it was computed from."""

    mean_raw: float
    mean_scaled: float
    per_video: list[dict] = field(default_factory=list)


def corpus_cider(results: Iterable[tuple[str, str, Sequence[str]]],
                 cfg: CiderConfig | None = None) -> CorpusCiderResult:
    """Score (video_id, candidate, references) triples as one corpus.

    The index is built over exactly these videos' references; the corpus
    score is the arithmetic mean of per-video raw scores.
    """
    cfg = cfg or CiderConfig()
    items = list(results)
    if not items:
        raise EmptyCorpus("no videos to score")
    index = build_index([refs for _, _, refs in items])
    per_video = []
    for video_id, candidate, refs in items:
        score = cider(candidate, refs, index, cfg)
        per_video.append({
            "video_id": video_id,
            "cider_raw": score.raw,
            "cider": score.scaled,
        })
    mean_raw = sum(row["cider_raw"] for row in per_video) / len(per_video)
    return CorpusCiderResult(
        mean_raw=mean_raw,
        mean_scaled=mean_raw * cfg.report_scale,
        per_video=per_video,
    )
