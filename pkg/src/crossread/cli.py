"""Command-line interface.

Subcommands mirror the pipeline: corpus stats, n-gram profiles and
overlap, genetic distance, feature extraction, forest training and
evaluation, and the full cross-lingual matrix.  Every subcommand takes
--json for machine-readable output.  Exit codes: 0 success, 1 invalid
input (bad flags, malformed files, mismatched schemas), 2 unexpected
runtime failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .corpus import corpus_stats, load_corpus
from .errors import ValidationError
from .experiments import (
    load_config,
    render_report,
    run_matrix,
)
from .features import (
    FEATURE_SETS,
    REFERENCE_LANGUAGES,
    assemble,
    load_embeddings,
    load_matrix,
    save_matrix,
)
from .forest import (
    ForestConfig,
    evaluate_split,
    load_model,
    save_model,
    train,
)
from .intelligibility import load_wordlist, relatedness_report
from .ngram import build_profile, overlap_matrix

CONFIG_ENV_VAR = "CROSSREAD_CONFIG"


class CliError(ValidationError):
    """Raised for bad command lines; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; route through the validation path
    def error(self, message: str):
        raise CliError("invalid-arguments", message)


def _emit(payload: dict, as_json: bool, text: str) -> None:
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def cmd_stats(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.manifest, strip_entities=not args.no_entity_strip)
    stats = corpus_stats(corpus)
    payload = {
        "language": corpus.language,
        "documents": len(corpus),
        "grades": {
            str(grade): {
                "doc_count": s.doc_count,
                "sent_count": s.sent_count,
                "vocab_size": s.vocab_size,
            }
            for grade, s in stats.items()
        },
    }
    lines = [f"language: {corpus.language}  documents: {len(corpus)}"]
    for grade, s in stats.items():
        lines.append(
            f"  grade {grade}: docs {s.doc_count:4d}  sentences {s.sent_count:5d}  "
            f"vocabulary {s.vocab_size:5d}"
        )
    _emit(payload, args.json, "\n".join(lines))
    return 0


def cmd_profile(args: argparse.Namespace) -> int:
    profiles = []
    for manifest in args.manifests:
        corpus = load_corpus(manifest, strip_entities=not args.no_entity_strip)
        profiles.append(build_profile(corpus, n=args.n, top_fraction=args.top))
    matrix = overlap_matrix(profiles, p=args.p)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for profile in profiles:
        path = out_dir / f"profile_{profile.language}_{profile.n}.tsv"
        lines = ["gram\tcount"]
        lines.extend(f"{gram}\t{count}" for gram, count in profile.entries)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(str(path))
    matrix_path = out_dir / f"overlap_{matrix.n}.tsv"
    header = "language\t" + "\t".join(matrix.languages)
    rows = [header]
    for i, lang in enumerate(matrix.languages):
        cells = "\t".join(f"{v:.6f}" for v in matrix.values[i])
        rows.append(f"{lang}\t{cells}")
    matrix_path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    written.append(str(matrix_path))

    payload = {
        "n": matrix.n,
        "p": matrix.p,
        "top_fraction": args.top,
        "languages": list(matrix.languages),
        "overlap": [[float(v) for v in row] for row in matrix.values],
        "profile_sizes": {p.language: len(p.entries) for p in profiles},
        "written": written,
    }
    _emit(payload, args.json, "\n".join(rows))
    return 0


def cmd_genetic(args: argparse.Namespace) -> int:
    wordlist = load_wordlist(args.wordlist)
    report = relatedness_report(
        wordlist, digraph_off=frozenset(args.digraph_off)
    )
    payload = {
        "languages": list(wordlist.languages),
        "pairs": [
            {
                "language_a": r.language_a,
                "language_b": r.language_b,
                "distance": r.distance,
                "concepts_compared": r.concepts_compared,
                "concepts_matched": r.concepts_matched,
                "category": r.category.value,
                "note": r.note,
            }
            for r in report
        ],
    }
    lines = []
    for r in report:
        note = f"  ({r.note})" if r.note else ""
        lines.append(
            f"{r.language_a}-{r.language_b}: {r.distance:7.3f}  {r.category.value}"
            f"  [{r.concepts_matched}/{r.concepts_compared} skeletons match]{note}"
        )
    _emit(payload, args.json, "\n".join(lines))
    return 0


def cmd_features(args: argparse.Namespace) -> int:
    corpora = [
        load_corpus(m, strip_entities=not args.no_entity_strip) for m in args.manifests
    ]
    profiles = None
    if args.set in ("TRAD_CROSSNGO", "ALL"):
        by_lang = {c.language: c for c in corpora}
        profiles = {}
        for lang in REFERENCE_LANGUAGES:
            corpus = by_lang.get(lang)
            docs = corpus.documents if corpus is not None else []
            if corpus is None:
                print(
                    f"note: no corpus for reference language {lang!r}; "
                    "its overlap columns will be 0",
                    file=sys.stderr,
                )
            for n in (2, 3):
                profiles[(lang, n)] = build_profile(
                    docs, n=n, top_fraction=args.top, language=lang
                )
    embeddings = None
    if args.embeddings:
        embeddings = load_embeddings(args.embeddings)
    matrix = assemble(
        corpora, args.set, profiles=profiles, embeddings=embeddings
    )
    save_matrix(matrix, args.out)
    payload = {
        "out": str(args.out),
        "rows": len(matrix.doc_ids),
        "columns": len(matrix.feature_names),
        "feature_set": args.set,
        "schema_fingerprint": matrix.fingerprint(),
    }
    _emit(
        payload,
        args.json,
        f"wrote {payload['rows']} rows x {payload['columns']} features to {args.out}",
    )
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    matrix = load_matrix(args.features)
    config = ForestConfig(
        num_trees=args.trees,
        seed=args.seed,
        bag_fraction=args.bag_fraction,
        max_depth=args.max_depth,
        criterion=args.criterion,
        natural_log_features=args.natural_log_features,
    )
    model = train(matrix, config)
    save_model(model, args.out)
    payload = {
        "out": str(args.out),
        "trees": config.num_trees,
        "seed": config.seed,
        "classes": list(model.class_labels),
        "features_per_node": model.features_per_node,
        "schema_fingerprint": model.fingerprint,
        "trained_on": len(matrix.doc_ids),
    }
    _emit(
        payload,
        args.json,
        f"trained {config.num_trees} trees on {payload['trained_on']} rows "
        f"-> {args.out}",
    )
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    matrix = load_matrix(args.features)
    result = evaluate_split(model, matrix)
    payload = result.to_dict()
    lines = [f"accuracy: {result.accuracy:.4f}  ({result.n_evaluated} documents)"]
    labels = result.class_labels
    lines.append("confusion (rows = actual):")
    lines.append("        " + "".join(f"{l:>6}" for l in labels))
    for label, row in zip(labels, result.confusion):
        lines.append(f"  {label:>6}" + "".join(f"{int(v):>6}" for v in row))
    _emit(payload, args.json, "\n".join(lines))
    return 0


def cmd_matrix(args: argparse.Namespace) -> int:
    config_path = args.config or os.environ.get(CONFIG_ENV_VAR)
    if not config_path:
        raise CliError(
            "missing-config",
            f"pass --config or set {CONFIG_ENV_VAR}",
        )
    config = load_config(config_path)
    if args.threads is not None:
        from dataclasses import replace

        config = replace(config, threads=args.threads)
        config.validate()
    report = run_matrix(config)
    rendered = render_report(report)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    json_path = out_dir / "report.json"
    text_path = out_dir / "report.txt"
    json_path.write_text(report.to_json(), encoding="utf-8")
    text_path.write_text(rendered, encoding="utf-8")

    failed = [c for c in report.cells if c.status == "failed"]
    if args.json:
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        print(rendered)
        print(f"report written to {json_path} and {text_path}")
        if failed:
            print(f"warning: {len(failed)} cells failed", file=sys.stderr)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="crossread", description=__doc__)
    parser.add_argument("--version", action="version", version=f"crossread {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="per-grade corpus statistics")
    p.add_argument("manifest")
    p.add_argument("--no-entity-strip", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("profile", help="build n-gram profiles and overlap matrix")
    p.add_argument("manifests", nargs="+", metavar="manifest")
    p.add_argument("--n", type=int, default=2, help="n-gram order (default 2)")
    p.add_argument(
        "--top", type=float, default=0.25,
        help="fraction of n-gram types kept (default 0.25)",
    )
    p.add_argument(
        "--p", type=float, default=0.9,
        help="rank-biased overlap persistence; 1.0 averages depths (default 0.9)",
    )
    p.add_argument("--out-dir", default=".")
    p.add_argument("--no-entity-strip", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("genetic", help="genetic distance from a concept wordlist")
    p.add_argument("wordlist")
    p.add_argument(
        "--digraph-off", action="append", default=["eng"], metavar="LANG",
        help="treat n+g as separate letters for LANG (repeatable; default eng)",
    )
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_genetic)

    p = sub.add_parser("features", help="extract a feature matrix to CSV")
    p.add_argument("manifests", nargs="+", metavar="manifest")
    p.add_argument("--set", choices=FEATURE_SETS, default="TRAD")
    p.add_argument("--out", required=True)
    p.add_argument("--top", type=float, default=0.25)
    p.add_argument("--embeddings", action="append", default=[], metavar="CSV")
    p.add_argument("--no-entity-strip", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("train", help="train a forest on a feature matrix")
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--trees", type=int, default=100)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--bag-fraction", type=float, default=1.0)
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("--criterion", choices=("entropy", "gini"), default="entropy")
    p.add_argument("--natural-log-features", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a model on a feature matrix")
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("matrix", help="run the cross-lingual experiment grid")
    p.add_argument(
        "--config",
        help=f"experiment config JSON (or set {CONFIG_ENV_VAR})",
    )
    p.add_argument("--out-dir", default=".")
    p.add_argument(
        "--threads", type=int, default=None,
        help="worker threads; results do not depend on this",
    )
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_matrix)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        # argparse's --help/--version path; keep in-process callers safe
        code = exc.code
        return code if isinstance(code, int) else 0
    except BrokenPipeError:
        return 0
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports and exits
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
