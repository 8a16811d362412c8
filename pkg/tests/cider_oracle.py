"""Naive, loop-based CIDEr used as an independent oracle.

Written before (and kept independent of) qcaption.evaluation. Everything is
plain dicts and for-loops: no shared code with the package beyond the pinned
conventions (lowercase/punctuation tokenizer, per-video min(1,.) document
frequency, unseen n-grams get idf = log(num_videos), zero-norm cosine = 0,
uniform weights 1/4).
"""

import math
import string

_PUNCT = str.maketrans({c: " " for c in string.punctuation})


def naive_tokenize(text):
    return [t for t in text.lower().translate(_PUNCT).split() if t]


def naive_ngrams(tokens, n):
    counts = {}
    for i in range(len(tokens) - n + 1):
        gram = tuple(tokens[i:i + n])
        counts[gram] = counts.get(gram, 0) + 1
    return counts


def naive_df(references, n):
    """Document frequency: number of videos whose reference set contains the
    n-gram at least once (the min(1, sum over refs) collapse)."""
    df = {}
    for refs in references:
        seen = set()
        for ref in refs:
            seen.update(naive_ngrams(naive_tokenize(ref), n).keys())
        for gram in seen:
            df[gram] = df.get(gram, 0) + 1
    return df


def naive_tfidf(caption, n, df, num_videos):
    counts = naive_ngrams(naive_tokenize(caption), n)
    total = sum(counts.values())
    vec = {}
    for gram, h in counts.items():
        idf = math.log(num_videos / df.get(gram, 1))
        vec[gram] = (h / total) * idf
    return vec


def naive_cosine(a, b):
    norm_a = math.sqrt(sum(v * v for v in a.values()))
    norm_b = math.sqrt(sum(v * v for v in b.values()))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    dot = sum(v * b.get(k, 0.0) for k, v in a.items())
    return dot / (norm_a * norm_b)


def naive_cider(candidate, refs, all_references, weights=(0.25, 0.25, 0.25, 0.25)):
    """CIDEr for one candidate against its reference set.

    all_references: list of per-video reference lists (the corpus the
    document frequencies are computed over).
    """
    num_videos = len(all_references)
    score = 0.0
    for n, w in zip(range(1, 5), weights):
        df = naive_df(all_references, n)
        cand_vec = naive_tfidf(candidate, n, df, num_videos)
        sim = 0.0
        for ref in refs:
            sim += naive_cosine(cand_vec, naive_tfidf(ref, n, df, num_videos))
        score += w * (sim / len(refs))
    return score


def naive_corpus_cider(candidates, references, weights=(0.25, 0.25, 0.25, 0.25)):
    """Mean per-video CIDEr over a corpus (candidates[i] scored against
    references[i], DF over all of references)."""
    scores = [
        naive_cider(c, refs, references, weights)
        for c, refs in zip(candidates, references)
    ]
    return sum(scores) / len(scores), scores
