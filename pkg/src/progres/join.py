"""Join filtering: an inverted index over sparse vectors, queried top-k.

Candidates must share at least one feature with the query; an inverted
index cannot see anything else, so Euclidean ranking is restricted to
feature-sharing entities as well.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dense import SimFn, clamp_weight
from .model import EntityProfile, Source, Task, WeightedPair, canonical_pair
from .nn import Indexing, resolve_directions, top_k_rows
from .sparse import FeatureScoring, SparseVector, TokenizerCfg, score_corpus, vectorize_queries


@dataclass(frozen=True)
class JoinConfig:
    k: int
    sim: SimFn
    indexing: Indexing
    tokenizer: TokenizerCfg
    scoring: FeatureScoring

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")


@dataclass
class InvertedIndex:
    """Postings per feature id plus per-entity squared norms.

    Postings are (entity ids, scores) arrays sorted by entity id. Norms
    are kept squared: the Euclidean distance is recovered from
    ||v-w||^2 = ||v||^2 + ||w||^2 - 2*dot, and summing squares directly
    (in feature order, matching the dot-product accumulation) keeps the
    distance of two identical vectors at exactly zero.
    """

    postings: dict[int, tuple[np.ndarray, np.ndarray]]
    norms_sq: np.ndarray
    n_entities: int
    n_features: int

    def norms(self) -> np.ndarray:
        return np.sqrt(self.norms_sq)

    def posting_list(self, fid: int) -> list[tuple[int, float]]:
        ids, scores = self.postings.get(fid, (np.array([], dtype=np.int64), np.array([])))
        return [(int(i), float(s)) for i, s in zip(ids, scores)]


def _sum_squares(vec: SparseVector) -> float:
    total = 0.0
    for _, s in vec.entries:
        total += s * s
    return total


def build_index(vectors: list[SparseVector], n_features: int | None = None) -> InvertedIndex:
    """Index one source's sparse vectors; entity id = list position."""
    raw: dict[int, tuple[list[int], list[float]]] = {}
    norms_sq = np.zeros(len(vectors))
    max_fid = -1
    for eid, vec in enumerate(vectors):
        norms_sq[eid] = _sum_squares(vec)
        for fid, score in vec.entries:
            ids, scores = raw.setdefault(fid, ([], []))
            ids.append(eid)
            scores.append(score)
            max_fid = max(max_fid, fid)
    postings = {
        fid: (np.asarray(ids, dtype=np.int64), np.asarray(scores))
        for fid, (ids, scores) in raw.items()
    }
    if n_features is None:
        n_features = max_fid + 1
    return InvertedIndex(postings, norms_sq, len(vectors), n_features)


def join_candidates(
    index: InvertedIndex,
    queries: list[SparseVector],
    sim: SimFn,
    k: int,
    task: Task,
    query_src: Source | None = None,
    index_src: Source | None = None,
) -> dict[tuple[int, int], float]:
    """Top-k feature-sharing neighbors per query, as canonical pair weights.

    Dot products are accumulated over the postings of the query's
    features, then turned into cosine or Euclidean similarity. Ties break
    toward the lower entity id; deduplication skips self-pairs.
    """
    out: dict[tuple[int, int], float] = {}
    index_norms = index.norms()
    for qid, vec in enumerate(queries):
        if vec.entries and vec.entries[-1][0] >= index.n_features:
            raise ValueError("query vector does not come from the index's vocabulary")
        acc = np.zeros(index.n_entities)
        touched = np.zeros(index.n_entities, dtype=bool)
        for fid, qscore in vec.entries:
            post = index.postings.get(fid)
            if post is None:
                continue
            ids, scores = post
            acc[ids] += qscore * scores
            touched[ids] = True
        if task is Task.DEDUP:
            touched[qid] = False
        cand = np.nonzero(touched)[0]
        if cand.size == 0:
            continue
        if sim is SimFn.COSINE:
            qnorm = np.sqrt(_sum_squares(vec))
            sims = acc[cand] / (qnorm * index_norms[cand])
        else:
            d_sq = np.maximum(_sum_squares(vec) + index.norms_sq[cand] - 2.0 * acc[cand], 0.0)
            sims = 1.0 / (1.0 + np.sqrt(d_sq))
        for pos in top_k_rows(sims, k):
            nid = int(cand[pos])
            if task is Task.DEDUP:
                key = canonical_pair(qid, nid, task)
            else:
                key = canonical_pair(qid, nid, task, query_src, index_src)
            w = clamp_weight(float(sims[pos]))
            if w > out.get(key, -1.0):
                out[key] = w
    return out


def join_workflow(
    profiles_a: list[EntityProfile],
    profiles_b: list[EntityProfile] | None,
    cfg: JoinConfig,
    task: Task,
) -> list[WeightedPair]:
    """Full join filtering: fit, index, query, merge directions.

    The vocabulary and scoring statistics are fitted on the indexed source
    of each direction; query vectors are projected onto that vocabulary.
    Repeated pairs under `both` indexing keep the maximum weight.
    """
    merged: dict[tuple[int, int], float] = {}
    if task is Task.DEDUP:
        vectors, vocab = score_corpus(profiles_a, cfg.tokenizer, cfg.scoring)
        index = build_index(vectors, n_features=len(vocab.feature_ids))
        merged = join_candidates(index, vectors, cfg.sim, cfg.k, task)
    else:
        if profiles_b is None:
            raise ValueError("record linkage needs both sources")
        sides = {Source.A: profiles_a, Source.B: profiles_b}
        for index_src, query_src in resolve_directions(
            cfg.indexing, len(profiles_a), len(profiles_b)
        ):
            vectors, vocab = score_corpus(sides[index_src], cfg.tokenizer, cfg.scoring)
            index = build_index(vectors, n_features=len(vocab.feature_ids))
            queries = vectorize_queries(sides[query_src], cfg.tokenizer, cfg.scoring, vocab)
            part = join_candidates(index, queries, cfg.sim, cfg.k, task, query_src, index_src)
            for key, w in part.items():
                if w > merged.get(key, -1.0):
                    merged[key] = w
    return [WeightedPair(l, r, w) for (l, r), w in sorted(merged.items())]
