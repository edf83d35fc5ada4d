"""Sparse feature vectors for the join workflows.

Texts are turned into character or token n-gram multisets, then scored
with Boolean, term-frequency or TF-IDF weights. The vocabulary (and the
document frequencies behind TF-IDF) is always fitted on the indexed
source; query vectors are projected onto it and unknown features dropped.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum

from .model import EntityProfile

CHAR_NGRAM_SIZES = (3, 4, 5)
TOKEN_NGRAM_SIZES = (1, 2)


@dataclass(frozen=True)
class TokenizerCfg:
    """Either character n-grams (n in 3..5) or token n-grams (n in 1..2)."""

    kind: str  # "char" | "word"
    n: int

    def __post_init__(self) -> None:
        if self.kind == "char":
            allowed = CHAR_NGRAM_SIZES
        elif self.kind == "word":
            allowed = TOKEN_NGRAM_SIZES
        else:
            raise ValueError(f"unknown tokenizer kind {self.kind!r}")
        if self.n not in allowed:
            raise ValueError(f"{self.kind} n-gram size must be in {allowed}, got {self.n}")

    @property
    def name(self) -> str:
        return f"{self.kind}{self.n}"


class FeatureScoring(Enum):
    BS = "bs"
    TF = "tf"
    TFIDF = "tfidf"


@dataclass(frozen=True)
class SparseVector:
    """Entries sorted by strictly increasing feature id, scores > 0."""

    entries: tuple[tuple[int, float], ...]

    def norm(self) -> float:
        return math.sqrt(sum(s * s for _, s in self.entries))


@dataclass(frozen=True)
class Vocabulary:
    """Feature ids, document frequencies and IDF fitted on one corpus."""

    feature_ids: dict[str, int]
    df: tuple[int, ...]
    n_docs: int

    def idf(self, fid: int) -> float:
        # natural log of |D| / df, no smoothing; df == |D| gives 0
        return math.log(self.n_docs / self.df[fid])


def tokenize(text: str, cfg: TokenizerCfg) -> list[str]:
    """Return the feature multiset of a (lowercased) text.

    Character n-grams slide over the raw text, whitespace included and no
    boundary padding. Token n-grams join whitespace-split tokens. Text
    shorter than n yields an empty result.
    """
    if cfg.kind == "char":
        return [text[i : i + cfg.n] for i in range(len(text) - cfg.n + 1)]
    tokens = text.split()
    return [" ".join(tokens[i : i + cfg.n]) for i in range(len(tokens) - cfg.n + 1)]


def _score_counts(counts: Counter, scoring: FeatureScoring) -> dict[str, float]:
    """Per-entity feature scores before any vocabulary projection."""
    if not counts:
        return {}
    if scoring is FeatureScoring.BS:
        return {f: 1.0 for f in counts}
    max_count = max(counts.values())
    return {f: c / max_count for f, c in counts.items()}


def score_corpus(
    profiles: list[EntityProfile],
    cfg: TokenizerCfg,
    scoring: FeatureScoring,
) -> tuple[list[SparseVector], Vocabulary]:
    """Fit a vocabulary on the corpus and score every profile.

    BS scores presence as 1, TF normalizes counts by the entity's highest
    count, TF-IDF multiplies TF by ln(|D|/df). Zero scores (a feature
    present in every profile under TF-IDF) are dropped from the vectors.
    """
    if not profiles:
        raise ValueError("cannot fit a vocabulary on an empty corpus")
    all_counts = [Counter(tokenize(p.agnostic_text, cfg)) for p in profiles]

    df_counter: Counter = Counter()
    for counts in all_counts:
        df_counter.update(counts.keys())
    features = sorted(df_counter)
    feature_ids = {f: i for i, f in enumerate(features)}
    vocab = Vocabulary(
        feature_ids=feature_ids,
        df=tuple(df_counter[f] for f in features),
        n_docs=len(profiles),
    )

    vectors = [_project(counts, scoring, vocab) for counts in all_counts]
    return vectors, vocab


def vectorize_queries(
    profiles: list[EntityProfile],
    cfg: TokenizerCfg,
    scoring: FeatureScoring,
    vocab: Vocabulary,
) -> list[SparseVector]:
    """Score query profiles against an already-fitted vocabulary.

    TF normalization uses the query's own full multiset (including
    out-of-vocabulary features); the projection happens afterwards.
    """
    return [_project(Counter(tokenize(p.agnostic_text, cfg)), scoring, vocab) for p in profiles]


def _project(counts: Counter, scoring: FeatureScoring, vocab: Vocabulary) -> SparseVector:
    raw = _score_counts(counts, scoring)
    entries = []
    for feature, score in raw.items():
        fid = vocab.feature_ids.get(feature)
        if fid is None:
            continue
        if scoring is FeatureScoring.TFIDF:
            score *= vocab.idf(fid)
        if score > 0.0:
            entries.append((fid, score))
    entries.sort()
    return SparseVector(entries=tuple(entries))
