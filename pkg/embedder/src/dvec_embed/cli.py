"""CLI: embed --input records.csv --model <name> --out vectors.dvec"""

from __future__ import annotations

import argparse
import sys

from .encoders import ModelError
from .export import EmbedJob, export_embeddings


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="embed",
        description="Export dense sentence embeddings of a delimited file to DVEC.",
    )
    parser.add_argument("--input", required=True, help="delimited records with a header row")
    parser.add_argument("--id-col", default="id", help="id column name (default: id)")
    parser.add_argument("--separator", default=",", help="field separator (default: ,)")
    parser.add_argument("--model", required=True,
                        help="sentence-transformers name/path, or a .vec/.txt word-vector file")
    parser.add_argument("--out", required=True, help="output DVEC path")
    parser.add_argument("--batch", type=int, default=32, help="encoding batch size")
    args = parser.parse_args(argv)

    try:
        job = EmbedJob(
            input_path=args.input,
            model=args.model,
            output_path=args.out,
            id_column=args.id_col,
            separator=args.separator,
            batch_size=args.batch,
        )
        out = export_embeddings(job)
    except (ModelError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out} (+ {out}.meta.json)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
