"""Blocking workflow: Token Blocking, block cleaning, weighted graph.

Every whitespace token of the schema-agnostic text opens a block. Blocks
are then purged (oversized ones removed by a parameter-free sweep) and
filtered (each entity keeps only the smallest 80% of its blocks), and the
surviving co-occurrences become the edges of a similarity graph weighted
by one of fourteen block-overlap schemes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .model import EntityProfile, Source, Task, WeightedPair, canonical_pair

NodeKey = tuple[str, int]  # ("a"|"b", entity id); deduplication always uses side "a"

BLOCKING_SCHEMES = (
    "cb",
    "cosine",
    "dice",
    "jaccard",
    "sn_cb",
    "sn_cosine",
    "sn_dice",
    "sn_jaccard",
    "cn_cb",
    "cn_cosine",
    "cn_dice",
    "cn_jaccard",
    "ecb",
    "ejs",
)


@dataclass(frozen=True)
class Block:
    """Entity ids sharing one signature; `b` stays empty for deduplication."""

    a: tuple[int, ...]
    b: tuple[int, ...] = ()


@dataclass
class BlockCollection:
    task: Task
    blocks: dict[str, Block]

    def size(self, sig: str) -> int:
        block = self.blocks[sig]
        return len(block.a) + len(block.b)

    def cardinality(self, sig: str) -> int:
        block = self.blocks[sig]
        if self.task is Task.RECORD_LINKAGE:
            return len(block.a) * len(block.b)
        n = len(block.a)
        return n * (n - 1) // 2

    def total_pairs(self) -> int:
        return sum(self.cardinality(sig) for sig in self.blocks)


@dataclass
class EntityBlockIndex:
    """Per-entity signature sets with size- and cardinality-normalized mass."""

    sigs: dict[NodeKey, frozenset[str]]
    sn_mass: dict[NodeKey, float]
    cn_mass: dict[NodeKey, float]


def _degenerate(block: Block, task: Task) -> bool:
    if task is Task.RECORD_LINKAGE:
        return not block.a or not block.b
    return len(block.a) < 2


def token_blocking(
    profiles_a: list[EntityProfile],
    profiles_b: list[EntityProfile] | None = None,
) -> BlockCollection:
    """One block per distinct token; blocks that cannot form a pair are dropped."""
    task = Task.RECORD_LINKAGE if profiles_b is not None else Task.DEDUP
    members_a: dict[str, set[int]] = {}
    members_b: dict[str, set[int]] = {}
    for profile in profiles_a:
        for token in set(profile.agnostic_text.split()):
            members_a.setdefault(token, set()).add(profile.id)
    for profile in profiles_b or []:
        for token in set(profile.agnostic_text.split()):
            members_b.setdefault(token, set()).add(profile.id)

    blocks: dict[str, Block] = {}
    for sig in set(members_a) | set(members_b):
        block = Block(
            a=tuple(sorted(members_a.get(sig, ()))),
            b=tuple(sorted(members_b.get(sig, ()))),
        )
        if not _degenerate(block, task):
            blocks[sig] = block
    return BlockCollection(task=task, blocks=blocks)


def block_purging(collection: BlockCollection) -> BlockCollection:
    """Drop oversized blocks with a parameter-free cardinality sweep.

    Walking the distinct block cardinalities in ascending order, track the
    cumulative entity-block assignments A and cumulative pairs P of all
    blocks up to each cardinality. The first time A/P drops, everything
    larger than the previous cardinality is purged; if the ratio never
    drops, nothing is. Ratios are compared by integer cross-multiplication,
    so the sweep is exact.
    """
    if not collection.blocks:
        return BlockCollection(collection.task, {})

    by_card: dict[int, list[str]] = {}
    for sig in collection.blocks:
        by_card.setdefault(collection.cardinality(sig), []).append(sig)

    cards = sorted(by_card)
    assignments = pairs = 0
    prev_a = prev_p = 0
    threshold = cards[-1]
    for j, card in enumerate(cards):
        assignments += sum(collection.size(s) for s in by_card[card])
        pairs += card * len(by_card[card])
        if j > 0 and assignments * prev_p < prev_a * pairs:  # A_j/P_j < A_{j-1}/P_{j-1}
            threshold = cards[j - 1]
            break
        prev_a, prev_p = assignments, pairs

    kept = {
        sig: block
        for sig, block in collection.blocks.items()
        if collection.cardinality(sig) <= threshold
    }
    return BlockCollection(collection.task, kept)


def block_filtering(collection: BlockCollection, ratio: float = 0.8) -> BlockCollection:
    """Remove each entity from its largest blocks, keeping ceil(ratio * |B_i|).

    An entity's blocks are ranked by cardinality ascending (signature
    order breaks ties); it survives only in the leading share. Blocks left
    without a pair are dropped.
    """
    task = collection.task
    per_entity: dict[NodeKey, list[str]] = {}
    for sig, block in collection.blocks.items():
        for eid in block.a:
            per_entity.setdefault(("a", eid), []).append(sig)
        for eid in block.b:
            per_entity.setdefault(("b", eid), []).append(sig)

    retained: dict[NodeKey, set[str]] = {}
    for key, sigs in per_entity.items():
        sigs.sort(key=lambda s: (collection.cardinality(s), s))
        keep = math.ceil(ratio * len(sigs))
        retained[key] = set(sigs[:keep])

    blocks: dict[str, Block] = {}
    for sig, block in collection.blocks.items():
        a = tuple(e for e in block.a if sig in retained[("a", e)])
        b = tuple(e for e in block.b if sig in retained[("b", e)])
        trimmed = Block(a=a, b=b)
        if not _degenerate(trimmed, task):
            blocks[sig] = trimmed
    return BlockCollection(task, blocks)


def entity_block_index(collection: BlockCollection) -> EntityBlockIndex:
    """Signature sets and normalized masses, consistent with the collection."""
    sigs: dict[NodeKey, set[str]] = {}
    for sig, block in collection.blocks.items():
        for eid in block.a:
            sigs.setdefault(("a", eid), set()).add(sig)
        for eid in block.b:
            sigs.setdefault(("b", eid), set()).add(sig)
    sn_mass: dict[NodeKey, float] = {}
    cn_mass: dict[NodeKey, float] = {}
    for key, owned in sigs.items():
        ordered = sorted(owned)  # fixed summation order keeps runs bit-identical
        sn_mass[key] = sum(1.0 / collection.size(s) for s in ordered)
        cn_mass[key] = sum(1.0 / collection.cardinality(s) for s in ordered)
    return EntityBlockIndex(
        sigs={k: frozenset(v) for k, v in sigs.items()},
        sn_mass=sn_mass,
        cn_mass=cn_mass,
    )


@dataclass
class SimilarityGraph:
    """Canonical candidate pairs with block-overlap weights."""

    task: Task
    pairs: list[WeightedPair]


def _pair_nodes(collection: BlockCollection) -> dict[tuple[int, int], tuple[NodeKey, NodeKey]]:
    """Every co-occurring canonical pair, mapped to its two node keys."""
    out: dict[tuple[int, int], tuple[NodeKey, NodeKey]] = {}
    if collection.task is Task.RECORD_LINKAGE:
        for block in collection.blocks.values():
            for i in block.a:
                for j in block.b:
                    key = canonical_pair(i, j, Task.RECORD_LINKAGE, Source.A, Source.B)
                    out[key] = (("a", i), ("b", j))
    else:
        for block in collection.blocks.values():
            for i, j in combinations(block.a, 2):
                key = canonical_pair(i, j, Task.DEDUP)
                out[key] = (("a", key[0]), ("a", key[1]))
    return out


def build_graph(collection: BlockCollection, scheme: str) -> SimilarityGraph:
    """Weight every co-occurring pair by the chosen block-overlap scheme."""
    if scheme not in BLOCKING_SCHEMES:
        raise ValueError(f"unknown weighting scheme {scheme!r}")
    index = entity_block_index(collection)
    pair_nodes = _pair_nodes(collection)

    n_blocks = len(collection.blocks)
    n_edges = len(pair_nodes)
    degrees: dict[NodeKey, int] = {}
    if scheme == "ejs":
        for ni, nj in pair_nodes.values():
            degrees[ni] = degrees.get(ni, 0) + 1
            degrees[nj] = degrees.get(nj, 0) + 1

    pairs = []
    for key in sorted(pair_nodes):
        ni, nj = pair_nodes[key]
        sigs_i, sigs_j = index.sigs[ni], index.sigs[nj]
        shared = sorted(sigs_i & sigs_j)
        cb = len(shared)
        bi, bj = len(sigs_i), len(sigs_j)

        if scheme == "cb":
            w = float(cb)
        elif scheme == "cosine":
            w = cb / math.sqrt(bi * bj)
        elif scheme == "dice":
            w = 2.0 * cb / (bi + bj)
        elif scheme == "jaccard":
            w = cb / (bi + bj - cb)
        elif scheme.startswith("sn_"):
            sn_cb = sum(1.0 / collection.size(s) for s in shared)
            mi, mj = index.sn_mass[ni], index.sn_mass[nj]
            w = _normalize(scheme[3:], sn_cb, mi, mj)
        elif scheme.startswith("cn_"):
            cn_cb = sum(1.0 / collection.cardinality(s) for s in shared)
            mi, mj = index.cn_mass[ni], index.cn_mass[nj]
            w = _normalize(scheme[3:], cn_cb, mi, mj)
        elif scheme == "ecb":
            w = cb * math.log(n_blocks / bi) * math.log(n_blocks / bj)
            w = max(w, 0.0)
        else:  # ejs
            jac = cb / (bi + bj - cb)
            w = jac * math.log(n_edges / degrees[ni]) * math.log(n_edges / degrees[nj])
            w = max(w, 0.0)
        pairs.append(WeightedPair(key[0], key[1], w))
    return SimilarityGraph(task=collection.task, pairs=pairs)


def _normalize(kind: str, shared_mass: float, mass_i: float, mass_j: float) -> float:
    if kind == "cb":
        return shared_mass
    if kind == "cosine":
        return shared_mass / math.sqrt(mass_i * mass_j)
    if kind == "dice":
        return 2.0 * shared_mass / (mass_i + mass_j)
    return shared_mass / (mass_i + mass_j - shared_mass)  # jaccard


def blocking_workflow(
    profiles_a: list[EntityProfile],
    profiles_b: list[EntityProfile] | None,
    scheme: str,
) -> list[WeightedPair]:
    """Token Blocking, purging, filtering, then the weighted graph's edges."""
    blocks = token_blocking(profiles_a, profiles_b)
    blocks = block_purging(blocks)
    blocks = block_filtering(blocks)
    return build_graph(blocks, scheme).pairs
