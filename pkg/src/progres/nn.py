"""Nearest-neighbor filtering over dense embedding matrices.

One source is indexed and the other queries it; each query entity
contributes its exact top-k neighbors as weighted candidate pairs.
Search is exact brute force: deterministic, and cheap enough at the
scales the evaluation harness runs at.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dense import SimFn, clamp_weight
from .model import Source, Task, WeightedPair, canonical_pair

K_VALUES = (1, 5, 10)


class Indexing(Enum):
    SMALLEST = "smallest"
    LARGEST = "largest"
    BOTH = "both"
    SINGLE = "single"  # deduplication: the only source is both index and query set


@dataclass(frozen=True)
class NNConfig:
    k: int
    sim: SimFn
    indexing: Indexing
    vectors_a: np.ndarray | None = None
    vectors_b: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")


def resolve_directions(indexing: Indexing, n_a: int, n_b: int) -> list[tuple[Source, Source]]:
    """Map an indexing scheme to (indexed source, query source) directions.

    Equal sizes index SourceA, for both the smallest and the largest
    scheme, so runs are deterministic.
    """
    if indexing is Indexing.BOTH:
        return [(Source.A, Source.B), (Source.B, Source.A)]
    if indexing is Indexing.SMALLEST:
        idx = Source.A if n_a <= n_b else Source.B
    elif indexing is Indexing.LARGEST:
        idx = Source.A if n_a >= n_b else Source.B
    else:
        raise ValueError(f"indexing scheme {indexing} needs two sources")
    return [(idx, Source.B if idx is Source.A else Source.A)]


def _sim_matrix(index: np.ndarray, query: np.ndarray, fn: SimFn) -> np.ndarray:
    """Similarities of every query row (axis 0) against every indexed row."""
    index = index.astype(np.float64)
    query = query.astype(np.float64)
    if fn is SimFn.EUCLIDEAN:
        diff = query[:, None, :] - index[None, :, :]
        dist = np.sqrt((diff * diff).sum(axis=2))
        return 1.0 / (1.0 + dist)
    inorms = np.linalg.norm(index, axis=1)
    qnorms = np.linalg.norm(query, axis=1)
    dots = query @ index.T
    denom = qnorms[:, None] * inorms[None, :]
    with np.errstate(invalid="ignore", divide="ignore"):
        sims = np.where(denom > 0.0, dots / denom, 0.0)
    return sims


def top_k_rows(sims: np.ndarray, k: int, exclude: int | None = None) -> list[int]:
    """Indices of the k largest similarities, ties broken by lower index."""
    n = sims.shape[0]
    order = np.lexsort((np.arange(n), -sims))
    picked = [int(i) for i in order if i != exclude]
    return picked[:k]


def nn_candidates(cfg: NNConfig, task: Task) -> list[WeightedPair]:
    """Run the NN workflow and return the merged canonical candidate set.

    Neighbors are ranked by raw similarity (ties to the lower id); the
    stored weight is clamped at 0. Under `both` indexing the two directions
    are merged keeping the maximum weight per canonical pair. Deduplication
    excludes self-pairs before the top-k cut. The result is sorted by pair
    key, purely for determinism.
    """
    merged: dict[tuple[int, int], float] = {}

    if task is Task.DEDUP:
        if cfg.vectors_a is None:
            raise ValueError("deduplication needs vectors_a")
        sims = _sim_matrix(cfg.vectors_a, cfg.vectors_a, cfg.sim)
        for qid in range(sims.shape[0]):
            for nid in top_k_rows(sims[qid], cfg.k, exclude=qid):
                key = canonical_pair(qid, nid, task)
                w = clamp_weight(float(sims[qid, nid]))
                if w > merged.get(key, -1.0):
                    merged[key] = w
    else:
        if cfg.vectors_a is None or cfg.vectors_b is None:
            raise ValueError("record linkage needs vectors_a and vectors_b")
        mats = {Source.A: cfg.vectors_a, Source.B: cfg.vectors_b}
        directions = resolve_directions(cfg.indexing, len(cfg.vectors_a), len(cfg.vectors_b))
        for index_src, query_src in directions:
            index_mat, query_mat = mats[index_src], mats[query_src]
            if index_mat.shape[0] == 0:
                continue
            sims = _sim_matrix(index_mat, query_mat, cfg.sim)
            for qid in range(sims.shape[0]):
                for nid in top_k_rows(sims[qid], cfg.k):
                    key = canonical_pair(qid, nid, task, query_src, index_src)
                    w = clamp_weight(float(sims[qid, nid]))
                    if w > merged.get(key, -1.0):
                        merged[key] = w

    return [WeightedPair(l, r, w) for (l, r), w in sorted(merged.items())]
