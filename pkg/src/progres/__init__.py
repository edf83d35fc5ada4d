"""Progressive entity resolution: filtering, weighting, scheduling, evaluation."""

from .dense import SimFn, read_dvec, write_dvec
from .ingest import Dataset, DatasetSpec, load_dataset
from .model import Budget, EntityProfile, GroundTruth, Source, Task, WeightedPair, canonical_pair
from .evaluation import budget_ladder, dft_ranking, grid_search, progressive_recall, recall_curve
from .pipeline import (
    BlockingParams,
    JoinParams,
    NNParams,
    SortingParams,
    compute_candidates,
    family_grid,
)
from .scheduling import schedule, schedule_bfs, schedule_dfs, schedule_ec, schedule_hybrid

__version__ = "0.1.0"

__all__ = [
    "Budget",
    "BlockingParams",
    "Dataset",
    "DatasetSpec",
    "EntityProfile",
    "GroundTruth",
    "JoinParams",
    "NNParams",
    "SimFn",
    "SortingParams",
    "Source",
    "Task",
    "WeightedPair",
    "budget_ladder",
    "canonical_pair",
    "compute_candidates",
    "dft_ranking",
    "family_grid",
    "grid_search",
    "load_dataset",
    "progressive_recall",
    "read_dvec",
    "recall_curve",
    "schedule",
    "schedule_bfs",
    "schedule_dfs",
    "schedule_ec",
    "schedule_hybrid",
    "write_dvec",
]
