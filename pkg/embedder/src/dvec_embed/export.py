"""Batch export of record embeddings to a DVEC file plus a metadata sidecar."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dvec import read_dvec, write_dvec
from .encoders import ModelError, resolve_encoder
from .textprep import load_texts


@dataclass(frozen=True)
class EmbedJob:
    input_path: str
    model: str
    output_path: str
    id_column: str = "id"
    separator: str = ","
    batch_size: int = 32

    def __post_init__(self) -> None:
        if self.batch_size < 1:
            raise ValueError(f"batch size must be >= 1, got {self.batch_size}")


def export_embeddings(job: EmbedJob) -> Path:
    """Embed every row's text and write the row-aligned DVEC file.

    Identical texts are encoded once and the vector reused, so identical
    input rows always yield byte-identical output rows no matter how the
    batches fall. The written file is read back and verified against the
    in-memory matrix before the sidecar is written.
    """
    texts = load_texts(job.input_path, job.id_column, job.separator)
    encoder = resolve_encoder(job.model)

    unique: dict[str, int] = {}
    for text in texts:
        unique.setdefault(text, len(unique))
    ordered = list(unique)

    chunks = []
    for start in range(0, len(ordered), job.batch_size):
        batch = encoder.encode(ordered[start:start + job.batch_size], job.batch_size)
        if batch.shape[1] != encoder.dim:
            raise ModelError(
                f"batch produced dimension {batch.shape[1]}, expected {encoder.dim}"
            )
        chunks.append(batch)
    if chunks:
        unique_matrix = np.concatenate(chunks, axis=0)
        matrix = unique_matrix[[unique[t] for t in texts]]
    else:
        matrix = np.zeros((0, encoder.dim), dtype=np.float32)

    out = Path(job.output_path)
    write_dvec(out, matrix)
    back = read_dvec(out)
    if back.shape != matrix.shape or not np.array_equal(back, matrix.astype(np.float32)):
        raise RuntimeError(f"{out}: written file does not round-trip losslessly")

    sidecar = {
        "model": job.model,
        "rows": int(matrix.shape[0]),
        "dim": int(encoder.dim),
        "pooling": encoder.pooling,
        "batch_size": job.batch_size,
        "input": str(job.input_path),
        "id_column": job.id_column,
    }
    Path(str(out) + ".meta.json").write_text(
        json.dumps(sidecar, indent=2) + "\n", encoding="utf-8"
    )
    return out
