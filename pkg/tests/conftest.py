"""Shared fixtures: synthetic instance generators and data paths."""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from progres.model import EntityProfile, Source

REPO_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = REPO_ROOT / "data"
TOY_DIR = DATA_DIR / "toy"
ABT_BUY_DIR = DATA_DIR / "abt_buy"


def make_profiles(texts: list[str], source: Source = Source.SINGLE) -> list[EntityProfile]:
    return [
        EntityProfile.build(i, source, [("text", t)]) for i, t in enumerate(texts)
    ]


def random_texts(rng: random.Random, n: int, vocab_size: int = 30,
                 min_tokens: int = 1, max_tokens: int = 6) -> list[str]:
    """Token soups with heavy overlap plus occasional near-duplicates."""
    vocab = [f"tok{i}" for i in range(vocab_size)]
    texts = []
    for _ in range(n):
        count = rng.randint(min_tokens, max_tokens)
        texts.append(" ".join(rng.choice(vocab) for _ in range(count)))
    # a few exact duplicates keep the identity edge cases exercised
    for _ in range(max(1, n // 10)):
        if len(texts) >= 2:
            src = rng.randrange(len(texts))
            dst = rng.randrange(len(texts))
            texts[dst] = texts[src]
    return texts


def random_matrix(rng: random.Random, rows: int, dim: int) -> list[list[float]]:
    mat = [[rng.uniform(-1.0, 1.0) for _ in range(dim)] for _ in range(rows)]
    if rows >= 2 and rng.random() < 0.5:
        mat[rng.randrange(rows)] = list(mat[rng.randrange(rows)])  # duplicate row
    return mat


def random_weighted_pairs(rng: random.Random, task: str, n_nodes: int, n_edges: int):
    """Unique canonical (left, right, weight) triples for scheduler tests."""
    edges: dict[tuple[int, int], float] = {}
    attempts = 0
    while len(edges) < n_edges and attempts < n_edges * 20:
        attempts += 1
        if task == "dedup":
            a, b = rng.sample(range(n_nodes), 2)
            key = (min(a, b), max(a, b))
        else:
            key = (rng.randrange(n_nodes), rng.randrange(n_nodes))
        # coarse weights force plenty of ties through the tie-break rules
        edges[key] = rng.choice([0.1, 0.25, 0.5, 0.5, 0.75, 0.9, 1.0])
    return [(l, r, w) for (l, r), w in sorted(edges.items())]


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240811)


# one pass/fail line per acceptance criterion, keyed by test name prefix
_CRITERION_RESULTS: dict[str, bool] = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_criterion_" not in name or report.when != "call":
        return
    key = name.split("test_criterion_")[1].split("_")[0]
    passed = _CRITERION_RESULTS.get(key, True) and report.outcome == "passed"
    _CRITERION_RESULTS[key] = passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERION_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for key in sorted(_CRITERION_RESULTS, key=int):
        verdict = "PASS" if _CRITERION_RESULTS[key] else "FAIL"
        terminalreporter.write_line(f"criterion {key}: {verdict}")
