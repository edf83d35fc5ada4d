"""Offline fixtures: a tiny local sentence-transformers model.

The hub is unreachable in CI sandboxes, so the suite builds a miniature
randomly-initialized BERT with a character-level vocabulary, wraps it
with mean pooling, and saves it to disk; loading by path exercises the
same code path as loading a hub model by name.
"""

from __future__ import annotations

import os

os.environ.setdefault("HF_HUB_OFFLINE", "1")
os.environ.setdefault("TRANSFORMERS_OFFLINE", "1")
os.environ.setdefault("TOKENIZERS_PARALLELISM", "false")

import pytest


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory) -> str:
    import torch
    from transformers import BertConfig, BertModel, BertTokenizerFast
    from sentence_transformers import SentenceTransformer

    root = tmp_path_factory.mktemp("tiny-model")
    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    letters = "abcdefghijklmnopqrstuvwxyz0123456789"
    vocab += list(letters) + ["##" + c for c in letters]
    (root / "vocab.txt").write_text("\n".join(vocab), encoding="utf-8")

    tokenizer = BertTokenizerFast(vocab_file=str(root / "vocab.txt"), do_lower_case=True)
    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=64,
    )
    torch.manual_seed(0)
    hf_dir = root / "hf"
    BertModel(config).save_pretrained(hf_dir)
    tokenizer.save_pretrained(hf_dir)

    # SentenceTransformer wraps a plain transformer with mean pooling
    st_dir = root / "st"
    SentenceTransformer(str(hf_dir)).save(str(st_dir))
    return str(st_dir)
