#!/usr/bin/env python3
"""Download the Abt-Buy benchmark into data/abt_buy/ (needs network access).

The distribution ships as a latin-1 encoded zip from the Leipzig database
group; files are re-encoded to UTF-8 so the loaders can read them
directly. The acceptance test for the BFS-vs-DFS trend looks for
Abt.csv, Buy.csv and abt_buy_perfectMapping.csv in that directory.
"""

from __future__ import annotations

import io
import sys
import urllib.request
import zipfile
from pathlib import Path

URL = "https://dbs.uni-leipzig.de/file/Abt-Buy.zip"
WANTED = ("Abt.csv", "Buy.csv", "abt_buy_perfectMapping.csv")
OUT = Path(__file__).resolve().parent.parent / "data" / "abt_buy"


def main() -> int:
    OUT.mkdir(parents=True, exist_ok=True)
    print(f"downloading {URL} ...")
    try:
        with urllib.request.urlopen(URL, timeout=60) as resp:
            payload = resp.read()
    except OSError as exc:
        print(f"download failed: {exc}", file=sys.stderr)
        print("if this machine has no network, fetch the zip elsewhere and "
              f"unpack {WANTED} into {OUT}", file=sys.stderr)
        return 1
    archive = zipfile.ZipFile(io.BytesIO(payload))
    found = 0
    for name in archive.namelist():
        base = Path(name).name
        if base not in WANTED:
            continue
        text = archive.read(name).decode("latin-1")
        (OUT / base).write_text(text, encoding="utf-8")
        print(f"wrote {OUT / base}")
        found += 1
    if found != len(WANTED):
        print(f"archive was missing files: got {found} of {len(WANTED)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
