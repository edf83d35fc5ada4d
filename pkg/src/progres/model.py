"""Core domain types shared by every stage of the pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Source(Enum):
    A = "a"
    B = "b"
    SINGLE = "single"


class Task(Enum):
    RECORD_LINKAGE = "record_linkage"
    DEDUP = "dedup"


@dataclass(frozen=True)
class EntityProfile:
    """One record: an id, a source tag, and its attribute name/value pairs.

    `agnostic_text` is the schema-agnostic representation: all attribute
    values concatenated in stored order, names discarded. Empty values are
    skipped so sparse records don't produce double spaces, and the text is
    lowercased once here so every downstream tokenizer sees the same form.
    """

    id: int
    source: Source
    attributes: tuple[tuple[str, str], ...]
    agnostic_text: str = field(default="")

    @staticmethod
    def build(id: int, source: Source, attributes: list[tuple[str, str]] | tuple) -> "EntityProfile":
        if id < 0:
            raise ValueError(f"entity id must be non-negative, got {id}")
        attrs = tuple((str(n), str(v)) for n, v in attributes)
        text = " ".join(v for _, v in attrs if v != "").lower()
        return EntityProfile(id=id, source=source, attributes=attrs, agnostic_text=text)


@dataclass(frozen=True)
class WeightedPair:
    """A candidate pair in canonical form with a non-negative weight.

    Record Linkage: left is a SourceA id, right a SourceB id.
    Deduplication: left < right.
    """

    left: int
    right: int
    weight: float

    def __post_init__(self) -> None:
        if self.weight < 0:
            raise ValueError(f"pair weight must be non-negative, got {self.weight}")

    @property
    def key(self) -> tuple[int, int]:
        return (self.left, self.right)


@dataclass(frozen=True)
class Budget:
    """Maximum number of pair verifications allowed."""

    value: int

    def __post_init__(self) -> None:
        if self.value < 1:
            raise ValueError(f"budget must be a positive integer, got {self.value}")


class SelfPairError(ValueError):
    """Raised when a deduplication pair references the same entity twice."""


def canonical_pair(
    a: int,
    b: int,
    task: Task,
    source_of_a: Source | None = None,
    source_of_b: Source | None = None,
) -> tuple[int, int]:
    """Return the canonical (left, right) key for a candidate pair.

    Deduplication orders by id, lower first. Record Linkage puts the
    SourceA id on the left regardless of argument order, which requires
    the callers to say which source each id belongs to.
    """
    if task is Task.DEDUP:
        if a == b:
            raise SelfPairError(f"deduplication pair cannot reference entity {a} twice")
        return (a, b) if a < b else (b, a)
    if source_of_a is None or source_of_b is None:
        raise ValueError("record-linkage canonicalization needs the source of both ids")
    if {source_of_a, source_of_b} != {Source.A, Source.B}:
        raise ValueError(
            f"record-linkage pair must span SourceA and SourceB, got {source_of_a}/{source_of_b}"
        )
    return (a, b) if source_of_a is Source.A else (b, a)


@dataclass(frozen=True)
class GroundTruth:
    """The oracle: the set of true duplicate pairs, canonicalized."""

    pairs: frozenset[tuple[int, int]]
    dup_count: int

    @staticmethod
    def from_pairs(raw: list[tuple[int, int]], task: Task) -> "GroundTruth":
        canon = frozenset(canonical_pair(a, b, task, Source.A, Source.B) for a, b in raw)
        return GroundTruth(pairs=canon, dup_count=len(canon))
