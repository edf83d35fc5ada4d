"""Dense embedding matrices: the DVEC file format and vector similarities.

DVEC layout, bit-exact: bytes 0-3 magic b"DVEC", bytes 4-7 row count and
bytes 8-11 dimension as unsigned 32-bit little-endian, then rows x dim
IEEE-754 32-bit floats, little-endian, row-major. Row index = entity id.
"""

from __future__ import annotations

import struct
from enum import Enum
from pathlib import Path

import numpy as np

MAGIC = b"DVEC"
_HEADER = struct.Struct("<4sII")


class DvecFormatError(ValueError):
    """The file is not a well-formed DVEC matrix."""


class SimFn(Enum):
    EUCLIDEAN = "euclidean"
    COSINE = "cosine"


def read_dvec(path: str | Path) -> np.ndarray:
    """Read a DVEC file into a float32 matrix of shape (rows, dim)."""
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise DvecFormatError(f"{path}: file shorter than the 12-byte header")
    magic, rows, dim = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise DvecFormatError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    if dim == 0:
        raise DvecFormatError(f"{path}: dimension must be positive")
    payload = data[_HEADER.size :]
    expected = rows * dim * 4
    if len(payload) != expected:
        raise DvecFormatError(
            f"{path}: payload is {len(payload)} bytes, expected {expected} for {rows}x{dim}"
        )
    matrix = np.frombuffer(payload, dtype="<f4").reshape(rows, dim)
    return np.ascontiguousarray(matrix)


def write_dvec(path: str | Path, matrix: np.ndarray) -> None:
    """Write a 2-D float matrix as a DVEC file (cast to float32)."""
    if matrix.ndim != 2:
        raise DvecFormatError(f"expected a 2-D matrix, got shape {matrix.shape}")
    rows, dim = matrix.shape
    if dim == 0:
        raise DvecFormatError("dimension must be positive")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, rows, dim))
        fh.write(np.ascontiguousarray(matrix, dtype="<f4").tobytes())


def similarity(v: np.ndarray, w: np.ndarray, fn: SimFn) -> float:
    """Similarity between two vectors.

    Euclidean maps distance through 1/(1+d), always in (0, 1]. Cosine is
    the raw angle similarity and may be negative; zero vectors get cosine
    0 by convention. Negative cosine is clamped only when a value is
    stored as a pair weight (see `clamp_weight`), not here, so neighbor
    ranking keeps the true order.
    """
    v = np.asarray(v, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if v.shape != w.shape:
        raise ValueError(f"dimension mismatch: {v.shape} vs {w.shape}")
    if fn is SimFn.EUCLIDEAN:
        return 1.0 / (1.0 + float(np.linalg.norm(v - w)))
    nv = float(np.linalg.norm(v))
    nw = float(np.linalg.norm(w))
    if nv == 0.0 or nw == 0.0:
        return 0.0
    return float(np.dot(v, w)) / (nv * nw)


def clamp_weight(sim: float) -> float:
    """Weight stored on a candidate pair; negative cosine clamps to 0."""
    return sim if sim > 0.0 else 0.0
