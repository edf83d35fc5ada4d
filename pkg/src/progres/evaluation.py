"""Progressive-recall metrics, distance-from-top ranking, and grid search."""

from __future__ import annotations

import os
import time
import tracemalloc
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Hashable, Iterator, Mapping, Sequence

from .ingest import Dataset
from .model import GroundTruth, WeightedPair
from .pipeline import Params, VectorPair, compute_candidates, config_string, family_grid, scheduling_partition
from .scheduling import SCHEDULERS, schedule

PairLike = WeightedPair | tuple


def _keys(schedule_like: Sequence[PairLike]) -> list[tuple[int, int]]:
    return [p.key if isinstance(p, WeightedPair) else (p[0], p[1]) for p in schedule_like]


@dataclass
class RunMetrics:
    progressive_recall: float
    recall_at_budget: float
    verified: int
    wall_time: float = 0.0
    peak_memory: int = 0


def recall_curve(schedule_like: Sequence[PairLike], gt: GroundTruth) -> list[float]:
    """Cumulative recall after each verified pair (one value per rank)."""
    if gt.dup_count == 0:
        raise ValueError("ground truth is empty, recall is undefined")
    found = 0
    curve = []
    for key in _keys(schedule_like):
        if key in gt.pairs:
            found += 1
        curve.append(found / gt.dup_count)
    return curve


def progressive_recall(
    schedule_like: Sequence[PairLike],
    gt: GroundTruth,
    budget: int,
) -> RunMetrics:
    """Area under the step curve over N verification slots, in [0, 1].

    The curve stays flat once the schedule is exhausted. Sums run over
    integer duplicate counts and divide once by N * |Dup|, so rank
    promotions shift the result by exactly 1/(N * |Dup|).
    """
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    if gt.dup_count == 0:
        raise ValueError("ground truth is empty, progressive recall is undefined")
    keys = _keys(schedule_like)
    if len(keys) > budget:
        raise ValueError(f"schedule holds {len(keys)} pairs, more than the budget {budget}")
    found = 0
    total = 0
    for key in keys:
        if key in gt.pairs:
            found += 1
        total += found
    total += (budget - len(keys)) * found
    return RunMetrics(
        progressive_recall=total / (budget * gt.dup_count),
        recall_at_budget=found / gt.dup_count,
        verified=len(keys),
    )


def dft_ranking(
    pr_table: Mapping[str, Mapping[Hashable, float]],
) -> list[tuple[str, float]]:
    """Rank solutions by mean distance from the top, ascending.

    `pr_table` maps solution -> cell -> progressive recall, where a cell
    is one (dataset, budget) combination shared by every solution. Cells
    whose maximum PR is 0 say nothing and are excluded from the mean.
    """
    solutions = list(pr_table)
    if not solutions:
        return []
    cells = set(pr_table[solutions[0]])
    for sol in solutions[1:]:
        if set(pr_table[sol]) != cells:
            raise ValueError("all solutions must cover the same cells")
    pr_max = {c: max(pr_table[sol][c] for sol in solutions) for c in cells}
    scored = set(c for c in cells if pr_max[c] > 0.0)
    if not scored:
        raise ValueError("every cell has zero maximum progressive recall")
    ranking = []
    for sol in solutions:
        dft = sum(1.0 - pr_table[sol][c] / pr_max[c] for c in sorted(scored, key=repr))
        ranking.append((sol, dft / len(scored)))
    ranking.sort(key=lambda item: (item[1], item[0]))
    return ranking


def budget_ladder(dup_count: int, steps: int = 10) -> list[int]:
    """The evaluation budgets n * |Dup| for n = 1..steps."""
    if dup_count < 1:
        raise ValueError("budget ladder needs a positive duplicate count")
    return [n * dup_count for n in range(1, steps + 1)]


@dataclass(frozen=True)
class GridCell:
    family: str
    config: str
    scheduler: str
    budget: int
    progressive_recall: float
    recall_at_budget: float
    verified: int
    filter_seconds: float    # measured once per config, shared by its cells
    schedule_seconds: float
    peak_memory_bytes: int   # traced over the filtering stage


@dataclass
class GridResult:
    cells: list[GridCell]
    best_per_scheduler: dict[str, tuple[str, float]]  # scheduler -> (config, mean DFT)


def _config_cells(
    dataset: Dataset,
    params: Params,
    budgets: Sequence[int],
    seed: int,
    vectors: Mapping[str, VectorPair] | None,
) -> list[GridCell]:
    tracemalloc.start()
    t0 = time.perf_counter()
    pairs = compute_candidates(dataset, params, vectors=vectors, seed=seed)
    filter_seconds = time.perf_counter() - t0
    peak = tracemalloc.get_traced_memory()[1]
    tracemalloc.stop()

    partition = scheduling_partition(params, dataset.task, dataset.size_a, dataset.size_b)
    cells = []
    for scheduler in SCHEDULERS:
        for budget in budgets:
            t1 = time.perf_counter()
            ordered = schedule(scheduler, pairs, budget, dataset.task, partition)
            metrics = progressive_recall(ordered, dataset.gt, budget)
            schedule_seconds = time.perf_counter() - t1
            cells.append(
                GridCell(
                    family=params.family,
                    config=config_string(params),
                    scheduler=scheduler,
                    budget=budget,
                    progressive_recall=metrics.progressive_recall,
                    recall_at_budget=metrics.recall_at_budget,
                    verified=metrics.verified,
                    filter_seconds=filter_seconds,
                    schedule_seconds=schedule_seconds,
                    peak_memory_bytes=peak,
                )
            )
    return cells


def iter_grid(
    dataset: Dataset,
    family: str,
    budgets: Sequence[int],
    seed: int = 42,
    vectors: Mapping[str, VectorPair] | None = None,
    workers: int = 1,
) -> Iterator[GridCell]:
    """Yield every (config, scheduler, budget) cell of a family's grid.

    Configs are independent, so with workers > 1 they run in a process
    pool; results stream back in configuration order either way.
    """
    model_names = tuple(sorted(vectors)) if vectors else ()
    configs = family_grid(family, dataset.task, model_names)
    if family == "nn" and not configs:
        raise ValueError("the NN grid needs at least one model's dense vectors")
    if workers <= 1:
        for params in configs:
            yield from _config_cells(dataset, params, budgets, seed, vectors)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        jobs = [(dataset, p, tuple(budgets), seed, vectors) for p in configs]
        for cells in pool.map(_config_cells_star, jobs):
            yield from cells


def _config_cells_star(job) -> list[GridCell]:
    return _config_cells(*job)


def grid_search(
    dataset: Dataset,
    family: str,
    budgets: Sequence[int],
    seed: int = 42,
    vectors: Mapping[str, VectorPair] | None = None,
    workers: int | None = None,
) -> GridResult:
    """Run a family's full grid and pick the min-mean-DFT config per scheduler.

    The per-cell maximum PR is taken across every configuration and
    scheduler of the family, following the evaluation protocol.
    """
    if workers is None:
        workers = threads_from_env()
    cells = list(iter_grid(dataset, family, budgets, seed, vectors, workers))
    pr_table: dict[str, dict[Hashable, float]] = {}
    for cell in cells:
        pr_table.setdefault(f"{cell.scheduler}|{cell.config}", {})[cell.budget] = (
            cell.progressive_recall
        )
    ranking = dft_ranking(pr_table)
    best: dict[str, tuple[str, float]] = {}
    for solution, dft in ranking:
        scheduler, config = solution.split("|", 1)
        if scheduler not in best:
            best[scheduler] = (config, dft)
    return GridResult(cells=cells, best_per_scheduler=best)


def threads_from_env(env: Mapping[str, str] | None = None) -> int:
    """Parallelism cap from PROGRES_THREADS (defaults to 1)."""
    raw = (env or os.environ).get("PROGRES_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"PROGRES_THREADS must be an integer, got {raw!r}")
    return max(value, 1)
