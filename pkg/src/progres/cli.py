"""Command-line front end: run one configuration, sweep a grid, or re-score.

Subcommands:
  run   execute one filtering + scheduling configuration, write artifacts
  grid  sweep a filtering family's full configuration grid
  eval  recompute metrics from an existing ordered-pairs file

All artifacts are reproducible byte-for-byte given (config, seed, inputs),
except measured performance numbers, which live in a separate `perf`
object / sidecar file precisely so the main artifacts stay deterministic.
"""

from __future__ import annotations

import argparse
import csv
import json
import re
import sys
import time
import tracemalloc
from pathlib import Path
from typing import Any

from . import evaluation
from .dense import DvecFormatError, read_dvec
from .ingest import Dataset, DatasetSpec, IngestError, load_dataset
from .model import Task
from .nn import K_VALUES
from .pipeline import (
    FAMILIES,
    SCORING_NAMES,
    SIM_NAMES,
    TOKENIZER_NAMES,
    BlockingParams,
    JoinParams,
    NNParams,
    Params,
    SortingParams,
    compute_candidates,
    config_string,
    scheduling_partition,
)
from .blocking import BLOCKING_SCHEMES
from .scheduling import SCHEDULERS, schedule
from .sorting import SORTING_SCHEMES, WINDOW_SIZES

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CONFIG = 2

_BUDGET_EXPR = re.compile(r"^\s*(\d+)\s*x\s*dup\s*$", re.IGNORECASE)


class ConfigError(ValueError):
    """The run configuration is structurally or semantically invalid."""


def parse_budget(raw: Any, dup_count: int) -> int:
    """A budget is a positive integer or an 'n x dup' expression."""
    if isinstance(raw, bool):
        raise ConfigError(f"invalid budget {raw!r}")
    if isinstance(raw, int):
        value = raw
    elif isinstance(raw, str):
        match = _BUDGET_EXPR.match(raw)
        if match:
            value = int(match.group(1)) * dup_count
        else:
            try:
                value = int(raw)
            except ValueError:
                raise ConfigError(f"cannot parse budget expression {raw!r}")
    else:
        raise ConfigError(f"invalid budget {raw!r}")
    if value < 1:
        raise ConfigError(f"budget must be >= 1, got {value}")
    return value


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigError(message)


def build_dataset_spec(raw: dict) -> DatasetSpec:
    _require(isinstance(raw, dict), "config field 'dataset' must be an object")
    _require("path_a" in raw, "dataset.path_a is required")
    _require("gt_path" in raw, "dataset.gt_path is required")
    return DatasetSpec(
        path_a=raw["path_a"],
        path_b=raw.get("path_b"),
        gt_path=raw["gt_path"],
        id_column=raw.get("id_column", "id"),
        separator=raw.get("separator", ","),
    )


def build_params(family: str, raw: dict, task: Task) -> Params:
    _require(family in FAMILIES, f"unknown family {family!r}, expected one of {FAMILIES}")
    raw = dict(raw)
    indexing_domain = ("single",) if task is Task.DEDUP else ("smallest", "largest", "both")

    def pop(key: str, default: Any = None, required: bool = False) -> Any:
        if required:
            _require(key in raw, f"params.{key} is required for family {family!r}")
        return raw.pop(key, default)

    if family == "nn":
        params: Params = NNParams(
            model=str(pop("model", required=True)),
            indexing=pop("indexing", indexing_domain[0]),
            sim=pop("sim", required=True),
            k=pop("k", required=True),
        )
    elif family == "join":
        params = JoinParams(
            indexing=pop("indexing", indexing_domain[0]),
            sim=pop("sim", required=True),
            k=pop("k", required=True),
            scoring=pop("scoring", required=True),
            tokenizer=pop("tokenizer", required=True),
        )
    elif family == "blocking":
        params = BlockingParams(scheme=pop("scheme", required=True))
    else:
        params = SortingParams(
            window=pop("window", required=True),
            scheme=pop("scheme", required=True),
            scope=pop("scope", "local"),
        )
    _require(not raw, f"unknown params for family {family!r}: {sorted(raw)}")

    if isinstance(params, (NNParams, JoinParams)):
        _require(params.indexing in indexing_domain,
                 f"indexing must be one of {indexing_domain}, got {params.indexing!r}")
        _require(params.sim in SIM_NAMES, f"sim must be one of {SIM_NAMES}, got {params.sim!r}")
        _require(params.k in K_VALUES, f"k must be one of {K_VALUES}, got {params.k!r}")
    if isinstance(params, JoinParams):
        _require(params.scoring in SCORING_NAMES,
                 f"scoring must be one of {SCORING_NAMES}, got {params.scoring!r}")
        _require(params.tokenizer in TOKENIZER_NAMES,
                 f"tokenizer must be one of {TOKENIZER_NAMES}, got {params.tokenizer!r}")
    if isinstance(params, BlockingParams):
        _require(params.scheme in BLOCKING_SCHEMES,
                 f"scheme must be one of {BLOCKING_SCHEMES}, got {params.scheme!r}")
    if isinstance(params, SortingParams):
        _require(params.window in WINDOW_SIZES,
                 f"window must be in {WINDOW_SIZES[0]}..{WINDOW_SIZES[-1]}, got {params.window!r}")
        _require(params.scheme in SORTING_SCHEMES,
                 f"scheme must be one of {SORTING_SCHEMES}, got {params.scheme!r}")
        _require(params.scope in ("local", "global"),
                 f"scope must be 'local' or 'global', got {params.scope!r}")
    return params


def load_config(path: str, overrides: argparse.Namespace) -> dict:
    cfg_path = Path(path)
    if not cfg_path.exists():
        raise FileNotFoundError(f"config file not found: {path}")
    try:
        cfg = json.loads(cfg_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}")
    _require(isinstance(cfg, dict), "config root must be a JSON object")
    for flag in ("seed", "out", "budget", "scheduler", "family"):
        value = getattr(overrides, flag, None)
        if value is not None:
            cfg[flag] = value
    cfg.setdefault("seed", 42)
    return cfg


def _load_vectors(cfg: dict, dataset: Dataset) -> dict:
    vectors = {}
    raw = cfg.get("vectors", {})
    _require(isinstance(raw, dict), "config field 'vectors' must map model names to paths")
    for model, paths in raw.items():
        _require(isinstance(paths, dict) and "a" in paths,
                 f"vectors.{model} must carry at least a path under 'a'")
        va = read_dvec(paths["a"])
        vb = read_dvec(paths["b"]) if "b" in paths and paths["b"] else None
        vectors[model] = (va, vb)
    return vectors


def _float_repr(x: float) -> str:
    return repr(float(x))


def _write_pairs_csv(path: Path, ordered) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rank", "left", "right", "weight"])
        for rank, pair in enumerate(ordered, start=1):
            writer.writerow([rank, pair.left, pair.right, _float_repr(pair.weight)])


def _write_curve_csv(path: Path, curve: list[float], budget: int) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rank", "cumulative_recall"])
        last = 0.0
        for rank in range(1, budget + 1):
            if rank <= len(curve):
                last = curve[rank - 1]
            writer.writerow([rank, _float_repr(last)])


def cmd_run(args: argparse.Namespace) -> int:
    cfg = load_config(args.config, args)
    dataset, params, scheduler, seed, out = _common_setup(cfg)
    budget = parse_budget(cfg.get("budget", "10xdup"), dataset.gt.dup_count)
    vectors = _load_vectors(cfg, dataset) if params.family == "nn" else None

    tracemalloc.start()
    t0 = time.perf_counter()
    pairs = compute_candidates(dataset, params, vectors=vectors, seed=seed)
    partition = scheduling_partition(params, dataset.task, dataset.size_a, dataset.size_b)
    ordered = schedule(scheduler, pairs, budget, dataset.task, partition)
    wall = time.perf_counter() - t0
    peak = tracemalloc.get_traced_memory()[1]
    tracemalloc.stop()

    metrics = evaluation.progressive_recall(ordered, dataset.gt, budget)
    curve = evaluation.recall_curve(ordered, dataset.gt)

    out.mkdir(parents=True, exist_ok=True)
    _write_pairs_csv(out / "pairs.csv", ordered)
    _write_curve_csv(out / "curve.csv", curve, budget)
    payload = {
        "task": dataset.task.value,
        "family": params.family,
        "config": config_string(params),
        "scheduler": scheduler,
        "budget": budget,
        "seed": seed,
        "dup_count": dataset.gt.dup_count,
        "progressive_recall": metrics.progressive_recall,
        "recall_at_budget": metrics.recall_at_budget,
        "verified": metrics.verified,
        "perf": {"wall_time_seconds": wall, "peak_memory_bytes": peak},
    }
    (out / "metrics.json").write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


GRID_COLUMNS = ["family", "config", "scheduler", "budget",
                "progressive_recall", "recall_at_budget", "verified"]
PERF_COLUMNS = ["family", "config", "scheduler", "budget",
                "filter_seconds", "schedule_seconds", "peak_memory_bytes"]


def cmd_grid(args: argparse.Namespace) -> int:
    cfg = load_config(args.config, args)
    dataset, _, _, seed, out = _common_setup(cfg, need_params=False)
    families = cfg.get("families") or [cfg.get("family")]
    _require(families and all(f in FAMILIES for f in families),
             f"grid needs 'family' or 'families' drawn from {FAMILIES}")
    raw_budgets = cfg.get("budgets") or [f"{n}xdup" for n in range(1, 11)]
    budgets = [parse_budget(b, dataset.gt.dup_count) for b in raw_budgets]
    vectors = _load_vectors(cfg, dataset) if "nn" in families else None
    workers = evaluation.threads_from_env()

    out.mkdir(parents=True, exist_ok=True)
    best: dict[str, dict] = {}
    with open(out / "grid.csv", "w", newline="", encoding="utf-8") as main_fh, \
         open(out / "grid_perf.csv", "w", newline="", encoding="utf-8") as perf_fh:
        main = csv.writer(main_fh)
        perf = csv.writer(perf_fh)
        main.writerow(GRID_COLUMNS)
        perf.writerow(PERF_COLUMNS)
        for family in families:
            result = evaluation.grid_search(
                dataset, family, budgets, seed=seed,
                vectors=vectors if family == "nn" else None, workers=workers,
            )
            for cell in result.cells:
                main.writerow([cell.family, cell.config, cell.scheduler, cell.budget,
                               _float_repr(cell.progressive_recall),
                               _float_repr(cell.recall_at_budget), cell.verified])
                perf.writerow([cell.family, cell.config, cell.scheduler, cell.budget,
                               _float_repr(cell.filter_seconds),
                               _float_repr(cell.schedule_seconds), cell.peak_memory_bytes])
                main_fh.flush()
                perf_fh.flush()
            best[family] = {
                scheduler: {"config": config, "mean_dft": dft}
                for scheduler, (config, dft) in sorted(result.best_per_scheduler.items())
            }
    (out / "grid_best.json").write_text(json.dumps(best, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    cfg = load_config(args.config, args)
    spec = build_dataset_spec(cfg.get("dataset", {}))
    dataset = load_dataset(spec)
    budget = parse_budget(cfg.get("budget", "10xdup"), dataset.gt.dup_count)

    pairs_path = Path(args.pairs)
    if not pairs_path.exists():
        raise FileNotFoundError(f"pairs file not found: {args.pairs}")
    with open(pairs_path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        _require(reader.fieldnames is not None and
                 {"left", "right"} <= set(reader.fieldnames),
                 "pairs file needs 'left' and 'right' columns")
        keys = [(int(row["left"]), int(row["right"])) for row in reader]

    keys = keys[:budget]
    metrics = evaluation.progressive_recall(keys, dataset.gt, budget)
    payload = {
        "task": dataset.task.value,
        "budget": budget,
        "dup_count": dataset.gt.dup_count,
        "progressive_recall": metrics.progressive_recall,
        "recall_at_budget": metrics.recall_at_budget,
        "verified": metrics.verified,
    }
    text = json.dumps(payload, indent=2)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "metrics.json").write_text(text + "\n", encoding="utf-8")
        _write_curve_csv(out / "curve.csv", evaluation.recall_curve(keys, dataset.gt), budget)
    print(text)
    return EXIT_OK


def _common_setup(cfg: dict, need_params: bool = True):
    spec = build_dataset_spec(cfg.get("dataset", {}))
    dataset = load_dataset(spec)
    scheduler = cfg.get("scheduler", "ec")
    _require(scheduler in SCHEDULERS,
             f"scheduler must be one of {SCHEDULERS}, got {scheduler!r}")
    seed = cfg.get("seed", 42)
    _require(isinstance(seed, int), f"seed must be an integer, got {seed!r}")
    _require("out" in cfg, "an output directory is required ('out' field or --out)")
    params = None
    if need_params:
        _require("family" in cfg, "config field 'family' is required")
        params = build_params(cfg["family"], cfg.get("params", {}), dataset.task)
    return dataset, params, scheduler, seed, Path(cfg["out"])


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="progres",
        description="Progressive entity resolution: filter, weight, schedule, evaluate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (("run", cmd_run), ("grid", cmd_grid), ("eval", cmd_eval)):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--budget", default=None)
        p.add_argument("--scheduler", default=None)
        p.add_argument("--family", default=None)
        if name == "eval":
            p.add_argument("--pairs", required=True, help="ordered pairs CSV to re-score")
        p.set_defaults(fn=fn)
    args = parser.parse_args(argv)

    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IngestError, DvecFormatError, FileNotFoundError) as exc:
        # bad or missing input data, as opposed to a bad configuration
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
