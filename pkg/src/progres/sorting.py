"""Sorting-based workflow: sorted token neighborhood with sliding windows.

All distinct tokens of all entities are sorted alphabetically; the
entities under each token are appended in seeded-random order, producing
the position array P. Entities whose positions fall within a window
co-occur, and co-occurrence statistics weight the candidate pairs.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .model import EntityProfile, Source, Task, WeightedPair, canonical_pair

NodeKey = tuple[str, int]

SORTING_SCHEMES = ("acf", "ncf", "dncf", "cncf", "id")
WINDOW_SIZES = tuple(range(2, 11))


@dataclass(frozen=True)
class SortCfg:
    window: int
    scheme: str
    scope: str  # "local" | "global"
    seed: int = 42

    def __post_init__(self) -> None:
        if self.window < 2:
            raise ValueError(f"window must be >= 2 so entities can co-occur, got {self.window}")
        if self.scheme not in SORTING_SCHEMES:
            raise ValueError(f"unknown sorting scheme {self.scheme!r}")
        if self.scope not in ("local", "global"):
            raise ValueError(f"scope must be 'local' or 'global', got {self.scope!r}")


@dataclass
class SortedPositionList:
    """The position array P and each entity's sorted slot indices."""

    slots: list[NodeKey]
    positions: dict[NodeKey, list[int]]


def build_positions(
    profiles_a: list[EntityProfile],
    profiles_b: list[EntityProfile] | None = None,
    seed: int = 42,
) -> SortedPositionList:
    """Build P: tokens sorted alphabetically, entities shuffled per token.

    One slot per (token, entity) occurrence with distinct tokens per
    entity. A single seeded generator shuffles the entity group of each
    token in token order, so a fixed seed reproduces P exactly.
    """
    groups: dict[str, list[NodeKey]] = {}
    for side, profiles in (("a", profiles_a), ("b", profiles_b or [])):
        for profile in profiles:
            for token in set(profile.agnostic_text.split()):
                groups.setdefault(token, []).append((side, profile.id))

    rng = random.Random(seed)
    slots: list[NodeKey] = []
    positions: dict[NodeKey, list[int]] = {}
    for token in sorted(groups):
        group = sorted(groups[token])
        rng.shuffle(group)
        for key in group:
            positions.setdefault(key, []).append(len(slots))
            slots.append(key)
    return SortedPositionList(slots=slots, positions=positions)


def window_pairs(plist: SortedPositionList, cfg: SortCfg, task: Task) -> list[WeightedPair]:
    """Weighted candidate pairs from slot co-occurrences.

    Local scope scores one window size w: a position pair qualifies when
    its distance is strictly below w (the entities' slots are always
    distinct, so no distance is ever zero). Global scope runs every window
    size from 2 up to w and sums the per-window scores. Pairs are
    canonicalized; record linkage keeps only cross-source pairs.

    NCF's co-occurrence Jaccard has no defined value once ACF reaches
    |positions_i| + |positions_j|; its denominator is floored at 1.
    """
    w = cfg.window
    slots = plist.slots
    n = len(slots)

    # distance histogram per canonical pair: dist_counts[key][d] for d in 1..w-1
    dist_counts: dict[tuple[int, int], list[int]] = {}
    pair_keys: dict[tuple[int, int], tuple[NodeKey, NodeKey]] = {}
    for s in range(n):
        u = slots[s]
        for t in range(s + 1, min(s + w, n)):
            v = slots[t]
            if u == v:
                continue
            if task is Task.RECORD_LINKAGE:
                if u[0] == v[0]:
                    continue
                key = canonical_pair(
                    u[1], v[1], task, _source(u), _source(v)
                )
            else:
                key = canonical_pair(u[1], v[1], task)
            hist = dist_counts.get(key)
            if hist is None:
                hist = dist_counts[key] = [0] * w
                pair_keys[key] = (u, v)
            hist[t - s] += 1

    pairs = []
    for key in sorted(dist_counts):
        hist = dist_counts[key]
        u, v = pair_keys[key]
        pi = len(plist.positions[u])
        pj = len(plist.positions[v])
        if cfg.scope == "local":
            weight = _window_score(cfg.scheme, hist, w, pi, pj)
        else:
            weight = sum(_window_score(cfg.scheme, hist, u_w, pi, pj) for u_w in range(2, w + 1))
        if weight > 0.0:
            pairs.append(WeightedPair(key[0], key[1], weight))
    return pairs


def _source(key: NodeKey) -> Source:
    return Source.A if key[0] == "a" else Source.B


def _window_score(scheme: str, hist: list[int], w: int, pi: int, pj: int) -> float:
    acf = sum(hist[d] for d in range(1, w))
    if acf == 0:
        return 0.0
    if scheme == "acf":
        return float(acf)
    if scheme == "ncf":
        return acf / max(pi + pj - acf, 1)
    if scheme == "dncf":
        return 2.0 * acf / (pi + pj)
    if scheme == "cncf":
        return acf / math.sqrt(pi * pj)
    return sum(hist[d] / d for d in range(1, w))  # id: inverse distances


def sorting_workflow(
    profiles_a: list[EntityProfile],
    profiles_b: list[EntityProfile] | None,
    cfg: SortCfg,
    task: Task,
) -> list[WeightedPair]:
    plist = build_positions(profiles_a, profiles_b, cfg.seed)
    return window_pairs(plist, cfg, task)
