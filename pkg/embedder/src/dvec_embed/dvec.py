"""The DVEC wire format: the consumer's bit-exact contract.

Bytes 0-3 magic b"DVEC"; bytes 4-7 row count and 8-11 dimension as
unsigned 32-bit little-endian; then rows x dim little-endian IEEE-754
float32, row-major. Row index = entity id of the exported source.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC = b"DVEC"
_HEADER = struct.Struct("<4sII")


def write_dvec(path: str | Path, matrix: np.ndarray) -> None:
    if matrix.ndim != 2 or matrix.shape[1] == 0:
        raise ValueError(f"need a 2-D matrix with a positive dimension, got {matrix.shape}")
    rows, dim = matrix.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, rows, dim))
        fh.write(np.ascontiguousarray(matrix, dtype="<f4").tobytes())


def read_dvec(path: str | Path) -> np.ndarray:
    """Reader used for self-verification after export."""
    data = Path(path).read_bytes()
    magic, rows, dim = _HEADER.unpack_from(data)
    if magic != MAGIC or dim == 0:
        raise ValueError(f"{path}: not a DVEC file")
    payload = data[_HEADER.size:]
    if len(payload) != rows * dim * 4:
        raise ValueError(f"{path}: truncated payload")
    return np.frombuffer(payload, dtype="<f4").reshape(rows, dim)
