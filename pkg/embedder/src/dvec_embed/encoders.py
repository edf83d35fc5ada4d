"""Model resolution: sentence-transformer models and static word vectors.

A model name ending in .vec or .txt is treated as a word2vec-style text
file of token vectors and sentences are embedded as the mean of their
known tokens (the conventional aggregation for static models). Anything
else is handed to sentence-transformers, which accepts both hub names
and local model directories.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


class ModelError(RuntimeError):
    """The model could not be resolved or produced inconsistent output."""


class StaticWordVectors:
    """Mean of per-token vectors from a word2vec-format text file."""

    pooling = "mean of token vectors"

    def __init__(self, path: str | Path):
        self.vectors: dict[str, np.ndarray] = {}
        dim: int | None = None
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh):
                parts = line.rstrip("\n").split(" ")
                if lineno == 0 and len(parts) == 2 and all(p.isdigit() for p in parts):
                    continue  # optional "count dim" header
                if len(parts) < 2:
                    continue
                token, values = parts[0], parts[1:]
                vec = np.asarray([float(v) for v in values], dtype=np.float32)
                if dim is None:
                    dim = vec.shape[0]
                elif vec.shape[0] != dim:
                    raise ModelError(f"{path}:{lineno + 1}: vector width {vec.shape[0]} != {dim}")
                self.vectors[token] = vec
        if dim is None:
            raise ModelError(f"{path}: no vectors found")
        self.dim = dim

    def encode(self, texts: list[str], batch_size: int) -> np.ndarray:
        out = np.zeros((len(texts), self.dim), dtype=np.float32)
        for i, text in enumerate(texts):
            hits = [self.vectors[t] for t in text.split() if t in self.vectors]
            if hits:
                out[i] = np.mean(hits, axis=0, dtype=np.float32)
        return out


class SentenceEncoder:
    """Any model sentence-transformers can load, including local paths."""

    def __init__(self, name: str):
        from sentence_transformers import SentenceTransformer

        try:
            self.model = SentenceTransformer(name)
        except Exception as exc:
            raise ModelError(f"could not load model {name!r}: {exc}") from exc
        dim_fn = getattr(self.model, "get_embedding_dimension", None)
        if dim_fn is None:  # sentence-transformers < 5
            dim_fn = self.model.get_sentence_embedding_dimension
        self.dim = int(dim_fn())
        self.pooling = self._pooling_description()

    def _pooling_description(self) -> str:
        for _, module in self.model.named_children():
            cfg_fn = getattr(module, "get_config_dict", None)
            if cfg_fn is None:
                continue
            cfg = cfg_fn()
            if isinstance(cfg.get("pooling_mode"), str):
                return cfg["pooling_mode"]
            legacy = [k.removeprefix("pooling_mode_")
                      for k, v in cfg.items() if k.startswith("pooling_mode") and v is True]
            if legacy:
                return ", ".join(legacy)
        return "model-defined"

    def encode(self, texts: list[str], batch_size: int) -> np.ndarray:
        emb = self.model.encode(
            texts,
            batch_size=batch_size,
            convert_to_numpy=True,
            normalize_embeddings=False,
            show_progress_bar=False,
        )
        return np.asarray(emb, dtype=np.float32)


def resolve_encoder(name: str):
    if name.endswith((".vec", ".txt")):
        if not Path(name).exists():
            raise ModelError(f"static vector file not found: {name}")
        return StaticWordVectors(name)
    return SentenceEncoder(name)
