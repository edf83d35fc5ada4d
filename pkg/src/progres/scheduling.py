"""Ordering weighted candidate pairs under a verification budget.

Four schedulers over the similarity graph: edge-centric global sorting
(EC), node-centric depth-first and breadth-first orders (DFS, BFS), and
the Hybrid that emits each node's best edge first and continues
depth-first. All of them break ties the same way (weight descending,
then left id, then right id; node ties by id) so runs are reproducible.

For Record Linkage the graph is bipartite and the node-centric
schedulers score only one partition: the query side of the filtering
configuration (SourceB when both sources were indexed). Deduplication
scores every node; canonical pair keys stop mirrored emission.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Literal

from .model import Task, WeightedPair

Partition = Literal["left", "right"]

SCHEDULERS = ("ec", "dfs", "bfs", "hybrid")


@dataclass(frozen=True)
class NodeScore:
    """A node's average incident weight and its weight-sorted edge list."""

    node: int
    score: float
    edges: tuple[WeightedPair, ...]


def _pair_sort_key(pair: WeightedPair) -> tuple[float, int, int]:
    return (-pair.weight, pair.left, pair.right)


def _check_budget(budget: int) -> None:
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")


def node_scores(
    pairs: Iterable[WeightedPair],
    task: Task,
    partition: Partition = "right",
) -> list[NodeScore]:
    """Scheduling nodes sorted by score descending, node id ascending."""
    neighborhoods: dict[int, list[WeightedPair]] = {}
    for pair in pairs:
        if task is Task.DEDUP:
            neighborhoods.setdefault(pair.left, []).append(pair)
            neighborhoods.setdefault(pair.right, []).append(pair)
        else:
            node = pair.left if partition == "left" else pair.right
            neighborhoods.setdefault(node, []).append(pair)
    scored = []
    for node, edges in neighborhoods.items():
        edges.sort(key=_pair_sort_key)
        score = sum(e.weight for e in edges) / len(edges)
        scored.append(NodeScore(node=node, score=score, edges=tuple(edges)))
    scored.sort(key=lambda ns: (-ns.score, ns.node))
    return scored


def schedule_ec(pairs: Iterable[WeightedPair], budget: int) -> list[WeightedPair]:
    """Global order: weight descending, truncated to the budget.

    Selection goes through a bounded heap that never holds more than
    `budget` entries, so memory stays at O(budget) even for huge graphs.
    """
    _check_budget(budget)
    return heapq.nsmallest(budget, pairs, key=_pair_sort_key)


def schedule_dfs(
    pairs: Iterable[WeightedPair],
    budget: int,
    task: Task,
    partition: Partition = "right",
) -> list[WeightedPair]:
    """Visit nodes by score; each one emits its whole remaining neighborhood."""
    _check_budget(budget)
    out: list[WeightedPair] = []
    seen: set[tuple[int, int]] = set()
    for ns in node_scores(pairs, task, partition):
        for pair in ns.edges:
            if pair.key in seen:
                continue
            seen.add(pair.key)
            out.append(pair)
            if len(out) == budget:
                return out
    return out


def schedule_bfs(
    pairs: Iterable[WeightedPair],
    budget: int,
    task: Task,
    partition: Partition = "right",
) -> list[WeightedPair]:
    """Round-robin: each round every node emits its next unemitted edge."""
    _check_budget(budget)
    nodes = node_scores(pairs, task, partition)
    cursors = [0] * len(nodes)
    out: list[WeightedPair] = []
    seen: set[tuple[int, int]] = set()
    active = True
    while active and len(out) < budget:
        active = False
        for i, ns in enumerate(nodes):
            pos = cursors[i]
            while pos < len(ns.edges) and ns.edges[pos].key in seen:
                pos += 1
            cursors[i] = pos
            if pos == len(ns.edges):
                continue
            pair = ns.edges[pos]
            cursors[i] = pos + 1
            seen.add(pair.key)
            out.append(pair)
            active = True
            if len(out) == budget:
                break
    return out


def schedule_hybrid(
    pairs: Iterable[WeightedPair],
    budget: int,
    task: Task,
    partition: Partition = "right",
) -> list[WeightedPair]:
    """Best edge per node first (globally sorted), then depth-first.

    Phase one is breadth-first search stopped after a single round; if
    budget remains, the depth-first order covers each node's remaining
    neighborhood.
    """
    _check_budget(budget)
    nodes = node_scores(pairs, task, partition)
    best = sorted((ns.edges[0] for ns in nodes), key=_pair_sort_key)
    out: list[WeightedPair] = []
    seen: set[tuple[int, int]] = set()
    for pair in best:
        if pair.key in seen:
            continue
        seen.add(pair.key)
        out.append(pair)
        if len(out) == budget:
            return out
    for ns in nodes:
        for pair in ns.edges:
            if pair.key in seen:
                continue
            seen.add(pair.key)
            out.append(pair)
            if len(out) == budget:
                return out
    return out


def schedule(
    name: str,
    pairs: Iterable[WeightedPair],
    budget: int,
    task: Task,
    partition: Partition = "right",
) -> list[WeightedPair]:
    if name == "ec":
        return schedule_ec(pairs, budget)
    if name == "dfs":
        return schedule_dfs(pairs, budget, task, partition)
    if name == "bfs":
        return schedule_bfs(pairs, budget, task, partition)
    if name == "hybrid":
        return schedule_hybrid(pairs, budget, task, partition)
    raise ValueError(f"unknown scheduler {name!r}")
