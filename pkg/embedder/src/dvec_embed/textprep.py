"""Turn delimited records into the texts the resolver embeds.

This mirrors the consumer's schema-agnostic representation exactly: all
non-id columns joined with single spaces in header order, empty values
skipped, lowercased. Row order is preserved because the consumer assigns
entity ids by row index.
"""

from __future__ import annotations

import csv
from pathlib import Path


def load_texts(path: str | Path, id_column: str = "id", separator: str = ",") -> list[str]:
    path = Path(path)
    texts: list[str] = []
    seen_ids: set[str] = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=separator)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected a header row")
        if id_column not in header:
            raise ValueError(f"{path}: id column {id_column!r} not in header {header}")
        id_idx = header.index(id_column)
        for row in reader:
            if not row:
                continue
            padded = row + [""] * (len(header) - len(row))
            key = padded[id_idx]
            if key in seen_ids:
                raise ValueError(f"{path}: duplicate id {key!r}; row alignment would break")
            seen_ids.add(key)
            values = [padded[i] for i in range(len(header)) if i != id_idx and padded[i] != ""]
            texts.append(" ".join(values).lower())
    return texts
