"""Command line for the embedding exporter.

Exit codes: 0 success, 1 unusable input or model, 2 unexpected failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .export import POOLING_MODES, ExportError, ExportJob, export_embeddings


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise ExportError("invalid-arguments", message)


def build_parser() -> _Parser:
    parser = _Parser(prog="embed-export", description=__doc__)
    parser.add_argument(
        "--version", action="version", version=f"embed-export {__version__}"
    )
    parser.add_argument("--manifest", required=True, help="corpus manifest TSV")
    parser.add_argument(
        "--model", required=True,
        help="encoder name or local path (hidden size must be 768)",
    )
    parser.add_argument("--out", required=True, help="CSV file to write")
    parser.add_argument("--batch-size", type=int, default=8)
    parser.add_argument(
        "--pooling", choices=POOLING_MODES, default="last",
        help="last: mean over final-layer tokens; all: mean over "
        "transformer layers, then tokens (default last)",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        job = ExportJob(
            manifest=Path(args.manifest),
            model=args.model,
            out=Path(args.out),
            batch_size=args.batch_size,
            pooling=args.pooling,
        )
        result = export_embeddings(job)
    except ExportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 0
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports and exits
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    if result.truncated_ids:
        print(
            f"{len(result.truncated_ids)} of {result.rows} documents truncated",
            file=sys.stderr,
        )
    print(f"wrote {result.rows} rows x {result.dimension} dims to {result.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
