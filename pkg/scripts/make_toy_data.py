#!/usr/bin/env python3
"""Regenerate the bundled toy datasets under data/toy/.

Deterministic by construction: fixed seeds, fixed row orders. The DVEC
fixtures are synthetic embeddings derived from character histograms of
each row's text, so near-duplicate rows land near each other in vector
space and the NN workflow has real signal to find.
"""

from __future__ import annotations

import csv
import random
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from progres.dense import write_dvec  # noqa: E402

OUT = Path(__file__).resolve().parent.parent / "data" / "toy"

FIRST = ["ana", "bruno", "carla", "david", "elena", "felix", "gina", "hugo",
         "irene", "jonas", "karin", "luis", "marta", "nils", "olga", "pavel",
         "quinn", "rosa", "sven", "tania"]
CITIES = ["lisbon", "porto", "madrid", "sevilla", "paris", "lyon", "rome",
          "milan", "berlin", "hamburg"]
STREETS = ["oak street", "elm avenue", "main road", "harbor lane", "park square"]


def _noisy(rng: random.Random, text: str) -> str:
    """Typo generator: drop, swap or duplicate one character."""
    if len(text) < 4:
        return text
    i = rng.randrange(1, len(text) - 1)
    op = rng.choice(["drop", "swap", "dup"])
    if op == "drop":
        return text[:i] + text[i + 1:]
    if op == "swap":
        return text[:i] + text[i + 1] + text[i] + text[i + 2:]
    return text[:i] + text[i] + text[i:]


def make_record_linkage(rng: random.Random):
    rows_a, rows_b, gt = [], [], []
    n_base = 24
    for i in range(n_base):
        name = f"{FIRST[i % len(FIRST)]} {FIRST[(i * 7 + 3) % len(FIRST)]}"
        street = STREETS[i % len(STREETS)]
        city = CITIES[i % len(CITIES)]
        phone = f"{200 + i * 13}{i % 10}"
        rows_a.append([f"a{i}", name, street, city, phone])
        if i < 18:  # duplicated across sources with noise
            noisy_name = _noisy(rng, name)
            noisy_street = street if rng.random() < 0.5 else _noisy(rng, street)
            rows_b.append([f"b{i}", noisy_name, noisy_street, city, phone])
            gt.append([f"a{i}", f"b{i}"])
    for j in range(8):  # distinct-only entities in B
        name = f"{FIRST[(j * 3 + 1) % len(FIRST)]} {FIRST[(j * 5 + 2) % len(FIRST)]}"
        rows_b.append([f"x{j}", name, STREETS[(j + 2) % len(STREETS)],
                       CITIES[(j + 4) % len(CITIES)], f"9{j}00{j}"])
    rng.shuffle(rows_b)
    return rows_a, rows_b, gt


def make_dedup(rng: random.Random):
    rows, gt = [], []
    eid = 0
    keys = []
    for c in range(14):
        name = f"{FIRST[c % len(FIRST)]} {FIRST[(c * 11 + 5) % len(FIRST)]}"
        city = CITIES[c % len(CITIES)]
        cluster = [f"{name}|{city}"]
        copies = 1 + (c % 3 == 0) + (c % 5 == 0)
        members = []
        for k in range(1 + copies):
            text = cluster[0] if k == 0 else f"{_noisy(rng, name)}|{city}"
            nm, ct = text.split("|")
            key = f"r{eid}"
            rows.append([key, nm, ct])
            members.append(key)
            eid += 1
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                gt.append([members[i], members[j]])
        keys.extend(members)
    rng.shuffle(rows)
    return rows, gt


def embed(texts: list[str], dim: int, seed: int) -> np.ndarray:
    """Character-histogram embeddings with a fixed random projection."""
    alphabet = "abcdefghijklmnopqrstuvwxyz0123456789 "
    hist = np.zeros((len(texts), len(alphabet)), dtype=np.float64)
    for r, text in enumerate(texts):
        for ch in text.lower():
            idx = alphabet.find(ch)
            if idx >= 0:
                hist[r, idx] += 1.0
    proj = np.random.default_rng(seed).normal(size=(len(alphabet), dim))
    out = hist @ proj
    norms = np.linalg.norm(out, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return (out / norms).astype(np.float32)


def write_csv(path: Path, header: list[str] | None, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if header:
            writer.writerow(header)
        writer.writerows(rows)


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    rng = random.Random(1337)

    rows_a, rows_b, gt_rl = make_record_linkage(rng)
    write_csv(OUT / "rl_a.csv", ["id", "name", "street", "city", "phone"], rows_a)
    write_csv(OUT / "rl_b.csv", ["id", "name", "street", "city", "phone"], rows_b)
    write_csv(OUT / "rl_gt.csv", None, gt_rl)

    rows_d, gt_d = make_dedup(rng)
    write_csv(OUT / "dedup.csv", ["id", "name", "city"], rows_d)
    write_csv(OUT / "dedup_gt.csv", None, gt_d)

    texts_a = [" ".join(r[1:]) for r in rows_a]
    texts_b = [" ".join(r[1:]) for r in rows_b]
    texts_d = [" ".join(r[1:]) for r in rows_d]
    write_dvec(OUT / "rl_a.dvec", embed(texts_a, 12, seed=101))
    write_dvec(OUT / "rl_b.dvec", embed(texts_b, 12, seed=101))
    write_dvec(OUT / "dedup.dvec", embed(texts_d, 12, seed=101))
    print(f"wrote toy datasets to {OUT}: |A|={len(rows_a)} |B|={len(rows_b)} "
          f"|gt_rl|={len(gt_rl)} |D|={len(rows_d)} |gt_d|={len(gt_d)}")


if __name__ == "__main__":
    main()
