"""Load delimited data sources and ground-truth pair files from disk."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .model import EntityProfile, GroundTruth, Source, Task, canonical_pair


class IngestError(ValueError):
    """Malformed input data: duplicate ids, unknown references, bad shape."""


@dataclass(frozen=True)
class DatasetSpec:
    """Where a dataset lives on disk. `path_b` absent means Deduplication."""

    path_a: str
    gt_path: str
    path_b: str | None = None
    id_column: str = "id"
    separator: str = ","

    @property
    def task(self) -> Task:
        return Task.RECORD_LINKAGE if self.path_b is not None else Task.DEDUP


@dataclass
class Dataset:
    """A loaded dataset: profiles per source plus the resolved ground truth."""

    task: Task
    profiles_a: list[EntityProfile]
    profiles_b: list[EntityProfile] | None
    gt: GroundTruth

    @property
    def size_a(self) -> int:
        return len(self.profiles_a)

    @property
    def size_b(self) -> int:
        return len(self.profiles_b) if self.profiles_b is not None else 0


def load_source(
    path: str | Path,
    id_column: str = "id",
    separator: str = ",",
    source: Source = Source.SINGLE,
) -> tuple[list[EntityProfile], dict[str, int]]:
    """Load one source file into profiles plus an external-key -> id map.

    Internal entity ids are assigned by row order starting at 0, so a dense
    vector file for the source aligns by row index. The id column carries
    the external keys the ground-truth file refers to; they must be unique
    within the source. All other columns become attributes in header order,
    missing cells become empty values.
    """
    path = Path(path)
    profiles: list[EntityProfile] = []
    key_to_id: dict[str, int] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=separator)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestError(f"{path}: empty file, expected a header row")
        if id_column not in header:
            raise IngestError(f"{path}: id column {id_column!r} not in header {header}")
        id_idx = header.index(id_column)
        attr_names = [h for i, h in enumerate(header) if i != id_idx]
        for row in reader:
            if not row:
                continue
            padded = row + [""] * (len(header) - len(row))
            key = padded[id_idx]
            if key in key_to_id:
                raise IngestError(f"{path}: duplicate id {key!r} in one source")
            values = [padded[i] for i in range(len(header)) if i != id_idx]
            eid = len(profiles)
            key_to_id[key] = eid
            profiles.append(EntityProfile.build(eid, source, list(zip(attr_names, values))))
    return profiles, key_to_id


def load_groundtruth(
    path: str | Path,
    task: Task,
    keys_a: dict[str, int],
    keys_b: dict[str, int] | None = None,
) -> GroundTruth:
    """Load a two-column pair file and canonicalize against the loaded sources.

    The file needs no header; if the first row does not resolve to known
    ids it is treated as a header and skipped. Any other unresolvable id is
    an error.
    """
    path = Path(path)
    if task is Task.RECORD_LINKAGE and keys_b is None:
        raise IngestError("record-linkage ground truth needs key maps for both sources")
    right_keys = keys_b if task is Task.RECORD_LINKAGE else keys_a

    pairs: set[tuple[int, int]] = set()
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    for i, row in enumerate(rows):
        if len(row) < 2:
            raise IngestError(f"{path}: row {i + 1} has fewer than two columns")
        ka, kb = row[0], row[1]
        if i == 0 and ka not in keys_a and kb not in right_keys:
            continue  # header row: neither cell resolves to a known id
        if ka not in keys_a:
            raise IngestError(f"{path}: unknown id {ka!r} in first column")
        if kb not in right_keys:
            raise IngestError(f"{path}: unknown id {kb!r} in second column")
        if task is Task.RECORD_LINKAGE:
            pairs.add(canonical_pair(keys_a[ka], right_keys[kb], task, Source.A, Source.B))
        else:
            pairs.add(canonical_pair(keys_a[ka], right_keys[kb], task))
    return GroundTruth(pairs=frozenset(pairs), dup_count=len(pairs))


def load_dataset(spec: DatasetSpec) -> Dataset:
    """Load both sources (or the single one) and the ground truth."""
    task = spec.task
    if task is Task.RECORD_LINKAGE:
        profiles_a, keys_a = load_source(spec.path_a, spec.id_column, spec.separator, Source.A)
        profiles_b, keys_b = load_source(spec.path_b, spec.id_column, spec.separator, Source.B)
        gt = load_groundtruth(spec.gt_path, task, keys_a, keys_b)
        return Dataset(task, profiles_a, profiles_b, gt)
    profiles, keys = load_source(spec.path_a, spec.id_column, spec.separator, Source.SINGLE)
    gt = load_groundtruth(spec.gt_path, task, keys)
    return Dataset(task, profiles, None, gt)
