"""Configuration space and end-to-end candidate generation per family.

One frozen params dataclass per filtering family, mirroring the
evaluation grid: NN (indexing x similarity x k x model), Join (those plus
scoring x tokenizer), Blocking (14 weighting schemes) and Sorting
(9 windows x 5 schemes x 2 scopes). Deduplication collapses the indexing
axis to "single".
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Mapping, Union

import numpy as np

from .blocking import BLOCKING_SCHEMES, blocking_workflow
from .dense import SimFn
from .ingest import Dataset
from .join import JoinConfig, join_workflow
from .model import Task, WeightedPair
from .nn import K_VALUES, Indexing, NNConfig, nn_candidates, resolve_directions
from .scheduling import Partition
from .sorting import SORTING_SCHEMES, WINDOW_SIZES, SortCfg, sorting_workflow
from .sparse import FeatureScoring, TokenizerCfg

FAMILIES = ("nn", "join", "blocking", "sorting")
SIM_NAMES = ("cosine", "euclidean")
SCORING_NAMES = ("bs", "tf", "tfidf")
TOKENIZER_NAMES = ("word1", "word2", "char3", "char4", "char5")

# (vectors_a, vectors_b); vectors_b is None for deduplication
VectorPair = tuple[np.ndarray, Union[np.ndarray, None]]


@dataclass(frozen=True)
class NNParams:
    model: str
    indexing: str
    sim: str
    k: int

    family = "nn"


@dataclass(frozen=True)
class JoinParams:
    indexing: str
    sim: str
    k: int
    scoring: str
    tokenizer: str

    family = "join"


@dataclass(frozen=True)
class BlockingParams:
    scheme: str

    family = "blocking"


@dataclass(frozen=True)
class SortingParams:
    window: int
    scheme: str
    scope: str

    family = "sorting"


Params = Union[NNParams, JoinParams, BlockingParams, SortingParams]


def config_string(params: Params) -> str:
    return ",".join(f"{f.name}={getattr(params, f.name)}" for f in fields(params))


def parse_tokenizer(name: str) -> TokenizerCfg:
    if name not in TOKENIZER_NAMES:
        raise ValueError(f"unknown tokenizer {name!r}, expected one of {TOKENIZER_NAMES}")
    return TokenizerCfg(kind=name[:4], n=int(name[4:]))


def _indexing_choices(task: Task) -> tuple[str, ...]:
    if task is Task.DEDUP:
        return ("single",)
    return ("smallest", "largest", "both")


def family_grid(
    family: str,
    task: Task,
    model_names: tuple[str, ...] = (),
) -> list[Params]:
    """The full configuration cross-product of one filtering family."""
    if family == "nn":
        return [
            NNParams(model=m, indexing=ix, sim=s, k=k)
            for m in model_names
            for ix in _indexing_choices(task)
            for s in SIM_NAMES
            for k in K_VALUES
        ]
    if family == "join":
        return [
            JoinParams(indexing=ix, sim=s, k=k, scoring=sc, tokenizer=tok)
            for ix in _indexing_choices(task)
            for s in SIM_NAMES
            for k in K_VALUES
            for sc in SCORING_NAMES
            for tok in TOKENIZER_NAMES
        ]
    if family == "blocking":
        return [BlockingParams(scheme=s) for s in BLOCKING_SCHEMES]
    if family == "sorting":
        return [
            SortingParams(window=w, scheme=s, scope=sc)
            for w in WINDOW_SIZES
            for s in SORTING_SCHEMES
            for sc in ("local", "global")
        ]
    raise ValueError(f"unknown filtering family {family!r}")


def scheduling_partition(params: Params, task: Task, n_a: int, n_b: int) -> Partition:
    """Which bipartite side the node-centric schedulers score.

    The query side of the filtering configuration; SourceB when both
    sources are indexed, and also for the blocking and sorting families,
    which have no index/query split.
    """
    if task is Task.DEDUP:
        return "right"
    if isinstance(params, (NNParams, JoinParams)):
        indexing = Indexing(params.indexing)
        if indexing is Indexing.BOTH:
            return "right"
        (_, query_src), = resolve_directions(indexing, n_a, n_b)
        return "left" if query_src.value == "a" else "right"
    return "right"


def compute_candidates(
    dataset: Dataset,
    params: Params,
    vectors: Mapping[str, VectorPair] | None = None,
    seed: int = 42,
) -> list[WeightedPair]:
    """Run one filtering family end to end and return its weighted pairs."""
    task = dataset.task
    if isinstance(params, NNParams):
        if vectors is None or params.model not in vectors:
            raise ValueError(f"no dense vectors supplied for model {params.model!r}")
        va, vb = vectors[params.model]
        _check_alignment(dataset, va, vb)
        cfg = NNConfig(
            k=params.k,
            sim=SimFn(params.sim),
            indexing=Indexing(params.indexing),
            vectors_a=va,
            vectors_b=vb,
        )
        return nn_candidates(cfg, task)
    if isinstance(params, JoinParams):
        cfg = JoinConfig(
            k=params.k,
            sim=SimFn(params.sim),
            indexing=Indexing(params.indexing),
            tokenizer=parse_tokenizer(params.tokenizer),
            scoring=FeatureScoring(params.scoring),
        )
        return join_workflow(dataset.profiles_a, dataset.profiles_b, cfg, task)
    if isinstance(params, BlockingParams):
        return blocking_workflow(dataset.profiles_a, dataset.profiles_b, params.scheme)
    if isinstance(params, SortingParams):
        cfg = SortCfg(window=params.window, scheme=params.scheme, scope=params.scope, seed=seed)
        return sorting_workflow(dataset.profiles_a, dataset.profiles_b, cfg, task)
    raise TypeError(f"unsupported params object {params!r}")


def _check_alignment(dataset: Dataset, va: np.ndarray, vb: np.ndarray | None) -> None:
    if va.shape[0] != dataset.size_a:
        raise ValueError(
            f"vectors_a has {va.shape[0]} rows but source A holds {dataset.size_a} entities"
        )
    if dataset.task is Task.RECORD_LINKAGE:
        if vb is None:
            raise ValueError("record linkage needs vectors for source B")
        if vb.shape[0] != dataset.size_b:
            raise ValueError(
                f"vectors_b has {vb.shape[0]} rows but source B holds {dataset.size_b} entities"
            )
