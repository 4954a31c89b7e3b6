"""Cross-lingual training grid: train-set rows by test-language columns.

Each cell trains a forest on one combination of language corpora and
evaluates it on one test language, for one feature set.  Two protocols
cover the grid:

- test language inside the training set: stratified k-fold on the test
  corpus, with the other training corpora joining every training fold
  whole (they are never evaluated);
- test language outside: train once on the full training corpora and
  evaluate once on the full test corpus.

Cross-lingual n-gram profiles are rebuilt per fold without the held-out
documents, so no evaluated document contributes to the top lists it is
scored against.  The `from_full_corpus` switch disables that hygiene
and mirrors the common practice of profiling whole corpora.
"""

from __future__ import annotations

import datetime as _dt
import json
import math
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import Corpus, Document, load_corpus
from .errors import ValidationError
from .features import (
    CROSSNGO_ORDERS,
    FEATURE_SETS,
    TRAD_FEATURE_NAMES,
    EmbeddingTable,
    FeatureMatrix,
    crossngo_feature_names,
    embedding_feature_names,
    load_embeddings,
    trad_features,
)
from .forest import (
    ForestConfig,
    TTestResult,
    evaluate_predictions,
    paired_t_test,
    predict,
    stratified_kfold,
    train,
    welch_t_test,
)
from .ngram import token_ngrams

DEFAULT_REFERENCE_LANGUAGES = ("tgl", "bcl", "ceb")


class ExperimentError(ValidationError):
    """Raised for unusable experiment configurations."""


@dataclass(frozen=True)
class ExperimentConfig:
    corpora: dict[str, Path]
    control_languages: tuple[str, ...] = ("eng",)
    reference_languages: tuple[str, ...] = DEFAULT_REFERENCE_LANGUAGES
    feature_sets: tuple[str, ...] = FEATURE_SETS
    embeddings: tuple[Path, ...] = ()
    top_fraction: float = 0.25
    profiles_from_full_corpus: bool = False
    strip_entities: bool = True
    digraph_off: frozenset[str] = frozenset(("eng",))
    folds: int = 5
    fold_seed: int = 1
    forest: ForestConfig = field(default_factory=ForestConfig)
    threads: int | None = None

    def validate(self) -> None:
        if not self.corpora:
            raise ExperimentError("invalid-config", "no corpora configured")
        unknown = [s for s in self.feature_sets if s not in FEATURE_SETS]
        if unknown:
            raise ExperimentError(
                "invalid-config", f"unknown feature sets: {unknown}"
            )
        if self.folds < 2:
            raise ExperimentError("invalid-config", "folds must be >= 2")
        if not 0.0 < self.top_fraction <= 1.0:
            raise ExperimentError("invalid-config", "top_fraction must be in (0, 1]")
        if self.threads is not None and self.threads < 1:
            raise ExperimentError("invalid-config", "threads must be >= 1")
        self.forest.validate()

    @property
    def study_languages(self) -> tuple[str, ...]:
        return tuple(
            lang for lang in self.corpora if lang not in self.control_languages
        )


def config_from_dict(raw: Mapping, base_dir: Path | None = None) -> ExperimentConfig:
    """Build a config from parsed JSON; paths resolve against `base_dir`."""
    base = base_dir or Path(".")

    def respath(p) -> Path:
        p = Path(p)
        return p if p.is_absolute() else base / p

    if "corpora" not in raw or not isinstance(raw["corpora"], Mapping):
        raise ExperimentError("invalid-config", "config needs a corpora mapping")
    corpora = {lang: respath(p) for lang, p in raw["corpora"].items()}

    emb = raw.get("embeddings") or ()
    if isinstance(emb, (str, Path)):
        emb = (emb,)
    embeddings = tuple(respath(p) for p in emb)

    profile = raw.get("profile", {})
    forest_raw = dict(raw.get("forest", {}))
    allowed = {
        "num_trees", "seed", "bag_fraction", "max_depth",
        "min_samples_leaf", "criterion", "num_features", "natural_log_features",
    }
    bad = set(forest_raw) - allowed
    if bad:
        raise ExperimentError("invalid-config", f"unknown forest options: {sorted(bad)}")
    forest = ForestConfig(**forest_raw)

    config = ExperimentConfig(
        corpora=corpora,
        control_languages=tuple(raw.get("control_languages", ("eng",))),
        reference_languages=tuple(
            raw.get("reference_languages", DEFAULT_REFERENCE_LANGUAGES)
        ),
        feature_sets=tuple(raw.get("feature_sets", FEATURE_SETS)),
        embeddings=embeddings,
        top_fraction=float(profile.get("top_fraction", 0.25)),
        profiles_from_full_corpus=bool(profile.get("from_full_corpus", False)),
        strip_entities=bool(raw.get("strip_entities", True)),
        digraph_off=frozenset(raw.get("digraph_off", ("eng",))),
        folds=int(raw.get("folds", 5)),
        fold_seed=int(raw.get("fold_seed", 1)),
        forest=forest,
        threads=raw.get("threads"),
    )
    config.validate()
    return config


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ExperimentError("missing-file", f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ExperimentError(
            "invalid-config", f"config {path} is not valid JSON: {exc}"
        ) from exc
    return config_from_dict(raw, base_dir=path.parent)


@dataclass(frozen=True)
class CellSpec:
    train_languages: tuple[str, ...]
    test_language: str
    feature_set: str

    @property
    def train_key(self) -> str:
        return "+".join(self.train_languages)

    @property
    def setup(self) -> str:
        if len(self.train_languages) == 1:
            return "singular"
        if len(self.train_languages) == 2:
            return "pairwise"
        return "full"

    @property
    def protocol(self) -> str:
        if self.test_language in self.train_languages:
            return "kfold-augmented"
        return "holdout-transfer"

    def sort_key(self) -> tuple:
        return (self.test_language, self.train_key, self.feature_set)


@dataclass
class CellResult:
    spec: CellSpec
    status: str  # ok | skipped | failed
    accuracy: float | None = None
    confusion: list[list[int]] | None = None
    class_labels: list[int] | None = None
    n_evaluated: int | None = None
    fold_assignments: dict[str, int] | None = None
    error: dict | None = None

    def to_dict(self) -> dict:
        return {
            "train_languages": list(self.spec.train_languages),
            "train_key": self.spec.train_key,
            "test_language": self.spec.test_language,
            "feature_set": self.spec.feature_set,
            "setup": self.spec.setup,
            "protocol": self.spec.protocol,
            "status": self.status,
            "accuracy": self.accuracy,
            "confusion": self.confusion,
            "class_labels": self.class_labels,
            "n_evaluated": self.n_evaluated,
            "fold_assignments": self.fold_assignments,
            "error": self.error,
        }


def enumerate_cells(config: ExperimentConfig) -> list[CellSpec]:
    """The full grid: train rows x test languages x feature sets.

    Rows are every single corpus (controls included), every pair of
    study languages, and the full set of study languages when there are
    at least three.  Control languages are never tested on.
    """
    study = config.study_languages
    rows: list[tuple[str, ...]] = [(lang,) for lang in config.corpora]
    rows.extend(combinations(study, 2))
    if len(study) >= 3:
        rows.append(tuple(study))
    specs = [
        CellSpec(train_languages=row, test_language=test, feature_set=fs)
        for row in rows
        for test in study
        for fs in config.feature_sets
    ]
    return specs


class ExperimentData:
    """Loaded corpora plus per-document caches shared across cells.

    Everything here is computed once and treated as read-only by the
    cell workers.
    """

    def __init__(self, config: ExperimentConfig) -> None:
        self.config = config
        self.corpora: dict[str, Corpus] = {}
        self.load_errors: dict[str, dict] = {}
        for lang, manifest in config.corpora.items():
            try:
                corpus = load_corpus(manifest, strip_entities=config.strip_entities)
                if corpus.language != lang:
                    raise ExperimentError(
                        "language-mismatch",
                        f"manifest {manifest} holds {corpus.language!r}, "
                        f"configured as {lang!r}",
                    )
                self.corpora[lang] = corpus
            except ValidationError as exc:
                self.load_errors[lang] = {
                    "code": getattr(exc, "code", "invalid-corpus"),
                    "message": str(exc),
                }

        self.embeddings: EmbeddingTable | None = None
        self.embedding_error: dict | None = None
        if config.embeddings:
            try:
                self.embeddings = load_embeddings(list(config.embeddings))
            except ValidationError as exc:
                self.embedding_error = {
                    "code": getattr(exc, "code", "invalid-embeddings"),
                    "message": str(exc),
                }

        ids_seen: dict[str, str] = {}
        for lang, corpus in self.corpora.items():
            for doc in corpus.documents:
                if doc.id in ids_seen:
                    # caches key on document id, so both corpora are unusable
                    error = {
                        "code": "duplicate-id",
                        "message": f"document id {doc.id!r} repeats across corpora",
                    }
                    self.load_errors[ids_seen[doc.id]] = error
                    self.load_errors[lang] = error
                ids_seen[doc.id] = lang

        self.trad_cache: dict[str, np.ndarray] = {}
        self.gram_counts: dict[tuple[str, int], dict[str, Counter]] = {}
        self.unique_grams: dict[tuple[str, int], frozenset[str]] = {}
        for lang, corpus in self.corpora.items():
            if lang in self.load_errors:
                continue
            for doc in corpus.documents:
                self.trad_cache[doc.id] = trad_features(
                    doc, digraph=lang not in config.digraph_off
                )
                for n in CROSSNGO_ORDERS:
                    counter: Counter[str] = Counter()
                    for token in doc.tokens:
                        counter.update(token_ngrams(token, n))
                    self.gram_counts.setdefault((lang, n), {})[doc.id] = counter
                    self.unique_grams[(doc.id, n)] = frozenset(counter)

    def profile_grams(self, lang: str, n: int, excluded_ids: frozenset[str]) -> frozenset[str]:
        """Top n-gram set for `lang`, without the excluded documents."""
        per_doc = self.gram_counts.get((lang, n), {})
        total: Counter[str] = Counter()
        for doc_id, counter in per_doc.items():
            if doc_id in excluded_ids:
                continue
            total.update(counter)
        ranked = sorted(total.items(), key=lambda kv: (-kv[1], kv[0]))
        keep = math.ceil(self.config.top_fraction * len(ranked))
        return frozenset(g for g, _ in ranked[:keep])


def _check_disjoint(train_ids: Iterable[str], test_ids: Iterable[str]) -> None:
    overlap = set(train_ids) & set(test_ids)
    if overlap:
        raise RuntimeError(
            f"leakage: documents in both train and test: {sorted(overlap)[:5]}"
        )


def _schema(feature_set: str, reference_langs: Sequence[str]) -> tuple[tuple[str, ...], tuple[str, ...]]:
    names: list[str] = []
    groups: list[str] = []
    if feature_set in ("TRAD", "TRAD_CROSSNGO", "ALL"):
        names.extend(TRAD_FEATURE_NAMES)
        groups.extend(["trad"] * len(TRAD_FEATURE_NAMES))
    if feature_set in ("TRAD_CROSSNGO", "ALL"):
        xnames = crossngo_feature_names(reference_langs)
        names.extend(xnames)
        groups.extend(["crossngo"] * len(xnames))
    if feature_set in ("EMB", "ALL"):
        enames = embedding_feature_names()
        names.extend(enames)
        groups.extend(["emb"] * len(enames))
    return tuple(names), tuple(groups)


def _build_rows(
    data: ExperimentData,
    docs: Sequence[Document],
    feature_set: str,
    profile_sets: Mapping[tuple[str, int], frozenset[str]] | None,
) -> FeatureMatrix:
    config = data.config
    names, groups = _schema(feature_set, config.reference_languages)
    docs = sorted(docs, key=lambda d: (d.language, d.id))
    rows: list[np.ndarray] = []
    for doc in docs:
        parts: list[np.ndarray] = []
        if feature_set in ("TRAD", "TRAD_CROSSNGO", "ALL"):
            parts.append(data.trad_cache[doc.id])
        if feature_set in ("TRAD_CROSSNGO", "ALL"):
            assert profile_sets is not None
            values = []
            for n in CROSSNGO_ORDERS:
                doc_grams = data.unique_grams[(doc.id, n)]
                for lang in config.reference_languages:
                    top = profile_sets.get((lang, n), frozenset())
                    if not doc_grams:
                        values.append(0.0)
                    else:
                        values.append(len(doc_grams & top) / len(doc_grams))
            parts.append(np.array(values, dtype=np.float64))
        if feature_set in ("EMB", "ALL"):
            assert data.embeddings is not None
            parts.append(data.embeddings.vectors[doc.id])
        rows.append(np.concatenate(parts))
    return FeatureMatrix(
        feature_names=names,
        feature_groups=groups,
        doc_ids=tuple(d.id for d in docs),
        languages=tuple(d.language for d in docs),
        labels=np.array([d.grade for d in docs], dtype=np.int64),
        values=np.vstack(rows) if rows else np.zeros((0, len(names))),
    )


def _profiles_for(
    data: ExperimentData, excluded_ids: frozenset[str]
) -> dict[tuple[str, int], frozenset[str]]:
    if data.config.profiles_from_full_corpus:
        excluded_ids = frozenset()
    return {
        (lang, n): data.profile_grams(lang, n, excluded_ids)
        for lang in data.config.reference_languages
        for n in CROSSNGO_ORDERS
    }


def run_cell(data: ExperimentData, spec: CellSpec) -> CellResult:
    """Train and evaluate one grid cell; failures stay inside the cell."""
    involved = set(spec.train_languages) | {spec.test_language}
    for lang in sorted(involved):
        if lang in data.load_errors:
            return CellResult(spec=spec, status="failed", error=data.load_errors[lang])
        if lang not in data.corpora:
            return CellResult(
                spec=spec,
                status="failed",
                error={"code": "unknown-language", "message": f"no corpus for {lang!r}"},
            )

    needs_embeddings = spec.feature_set in ("EMB", "ALL")
    if needs_embeddings:
        if data.embedding_error is not None:
            return CellResult(spec=spec, status="failed", error=data.embedding_error)
        if data.embeddings is None:
            return CellResult(
                spec=spec,
                status="skipped",
                error={
                    "code": "missing-embeddings",
                    "message": "no embedding table configured; provide one to run "
                    "EMB and ALL cells",
                },
            )
        missing = [
            doc.id
            for lang in sorted(involved)
            for doc in data.corpora[lang].documents
            if doc.id not in data.embeddings
        ]
        if missing:
            return CellResult(
                spec=spec,
                status="failed",
                error={
                    "code": "missing-embedding",
                    "message": f"no embedding rows for: {missing[:5]}",
                },
            )

    try:
        if spec.test_language in spec.train_languages:
            result = _run_kfold_cell(data, spec)
        else:
            result = _run_transfer_cell(data, spec)
    except ValidationError as exc:
        return CellResult(
            spec=spec,
            status="failed",
            error={"code": getattr(exc, "code", "invalid"), "message": str(exc)},
        )
    return result


def _run_kfold_cell(data: ExperimentData, spec: CellSpec) -> CellResult:
    config = data.config
    test_corpus = data.corpora[spec.test_language]
    assignment = stratified_kfold(
        [d.grade for d in test_corpus.documents],
        [d.id for d in test_corpus.documents],
        k=config.folds,
        seed=config.fold_seed,
    )
    aux_docs = [
        doc
        for lang in spec.train_languages
        if lang != spec.test_language
        for doc in data.corpora[lang].documents
    ]
    gold: list[int] = []
    predicted: list[int] = []
    for fold in range(config.folds):
        test_docs = [d for d in test_corpus.documents if assignment[d.id] == fold]
        own_train = [d for d in test_corpus.documents if assignment[d.id] != fold]
        train_docs = own_train + aux_docs
        _check_disjoint((d.id for d in train_docs), (d.id for d in test_docs))
        profiles = _profiles_for(data, frozenset(d.id for d in test_docs))
        train_matrix = _build_rows(data, train_docs, spec.feature_set, profiles)
        test_matrix = _build_rows(data, test_docs, spec.feature_set, profiles)
        model = train(train_matrix, config.forest)
        fold_pred = predict(model, test_matrix)
        gold.extend(int(v) for v in test_matrix.labels)
        predicted.extend(int(v) for v in fold_pred)
    class_labels = sorted({*gold, *predicted})
    eval_result = evaluate_predictions(gold, predicted, class_labels=class_labels)
    return CellResult(
        spec=spec,
        status="ok",
        accuracy=eval_result.accuracy,
        confusion=[[int(v) for v in row] for row in eval_result.confusion],
        class_labels=list(eval_result.class_labels),
        n_evaluated=eval_result.n_evaluated,
        fold_assignments=dict(sorted(assignment.items())),
    )


def _run_transfer_cell(data: ExperimentData, spec: CellSpec) -> CellResult:
    test_corpus = data.corpora[spec.test_language]
    train_docs = [
        doc
        for lang in spec.train_languages
        for doc in data.corpora[lang].documents
    ]
    test_docs = list(test_corpus.documents)
    _check_disjoint((d.id for d in train_docs), (d.id for d in test_docs))
    profiles = _profiles_for(data, frozenset(d.id for d in test_docs))
    train_matrix = _build_rows(data, train_docs, spec.feature_set, profiles)
    test_matrix = _build_rows(data, test_docs, spec.feature_set, profiles)
    model = train(train_matrix, data.config.forest)
    predicted = predict(model, test_matrix)
    eval_result = evaluate_predictions(
        [int(v) for v in test_matrix.labels],
        [int(v) for v in predicted],
        class_labels=sorted(
            {int(v) for v in train_matrix.labels}
            | {int(v) for v in test_matrix.labels}
        ),
    )
    return CellResult(
        spec=spec,
        status="ok",
        accuracy=eval_result.accuracy,
        confusion=[[int(v) for v in row] for row in eval_result.confusion],
        class_labels=list(eval_result.class_labels),
        n_evaluated=eval_result.n_evaluated,
        fold_assignments=None,
    )


@dataclass
class Comparison:
    name: str
    selector_a: dict
    selector_b: dict
    status: str  # ok | skipped
    result: TTestResult | None = None
    n_pairs: int | None = None
    note: str | None = None

    def to_dict(self) -> dict:
        payload = {
            "name": self.name,
            "selector_a": self.selector_a,
            "selector_b": self.selector_b,
            "status": self.status,
            "n_pairs": self.n_pairs,
            "note": self.note,
        }
        if self.result is not None:
            payload.update(
                {
                    "statistic": self.result.statistic,
                    "df": self.result.df,
                    "p_value": self.result.p_value,
                    "paired": self.result.paired,
                }
            )
        return payload


def _select_cells(cells: Sequence[CellResult], selector: Mapping) -> list[CellResult]:
    def matches(cell: CellResult) -> bool:
        spec = cell.spec
        if "setup" in selector and spec.setup != selector["setup"]:
            return False
        if "feature_set" in selector and spec.feature_set != selector["feature_set"]:
            return False
        if "test_language" in selector and spec.test_language != selector["test_language"]:
            return False
        if "train_key" in selector and spec.train_key != selector["train_key"]:
            return False
        if "protocol" in selector and spec.protocol != selector["protocol"]:
            return False
        return True

    picked = [c for c in cells if matches(c) and c.status == "ok"]
    picked.sort(key=lambda c: c.spec.sort_key())
    return picked


def compare_groups(
    cells: Sequence[CellResult],
    name: str,
    selector_a: Mapping,
    selector_b: Mapping,
    paired: bool = True,
) -> Comparison:
    """Significance test between two groups of cell accuracies.

    Cells are selected by spec fields, sorted by (test language, train
    key, feature set) and paired positionally.  Mismatched group sizes
    or empty groups make the comparison a skip, not an error.
    """
    group_a = _select_cells(cells, selector_a)
    group_b = _select_cells(cells, selector_b)
    base = Comparison(
        name=name, selector_a=dict(selector_a), selector_b=dict(selector_b), status="skipped"
    )
    if not group_a or not group_b:
        base.note = "one or both groups have no completed cells"
        return base
    if paired and len(group_a) != len(group_b):
        base.note = (
            f"groups differ in size ({len(group_a)} vs {len(group_b)}); "
            "cannot pair positionally"
        )
        return base
    scores_a = [c.accuracy for c in group_a]
    scores_b = [c.accuracy for c in group_b]
    try:
        result = (
            paired_t_test(scores_a, scores_b) if paired else welch_t_test(scores_a, scores_b)
        )
    except ValidationError as exc:
        base.note = str(exc)
        return base
    base.status = "ok"
    base.result = result
    base.n_pairs = len(scores_a)
    return base


def default_comparisons(config: ExperimentConfig, cells: Sequence[CellResult]) -> list[Comparison]:
    out: list[Comparison] = []
    if "TRAD_CROSSNGO" in config.feature_sets and "EMB" in config.feature_sets:
        out.append(
            compare_groups(
                cells,
                "singular-trad-crossngo-vs-emb",
                {"setup": "singular", "feature_set": "TRAD_CROSSNGO"},
                {"setup": "singular", "feature_set": "EMB"},
            )
        )
    out.append(
        compare_groups(
            cells,
            "pairwise-vs-singular",
            {"setup": "pairwise"},
            {"setup": "singular", "protocol": "kfold-augmented"},
            paired=False,
        )
    )
    return out


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    cells: list[CellResult]
    comparisons: list[Comparison]
    generated_at: str

    def to_dict(self) -> dict:
        return {
            "metadata": {
                "generated_at": self.generated_at,
                "fold_seed": self.config.fold_seed,
                "folds": self.config.folds,
                "forest_seed": self.config.forest.seed,
                "num_trees": self.config.forest.num_trees,
                "top_fraction": self.config.top_fraction,
                "profile_provenance": (
                    "full-corpus"
                    if self.config.profiles_from_full_corpus
                    else "test-documents-excluded"
                ),
                "strip_entities": self.config.strip_entities,
                "feature_sets": list(self.config.feature_sets),
                "languages": {
                    "study": list(self.config.study_languages),
                    "control": [
                        lang
                        for lang in self.config.corpora
                        if lang in self.config.control_languages
                    ],
                    "reference": list(self.config.reference_languages),
                },
            },
            "cells": [c.to_dict() for c in self.cells],
            "comparisons": [c.to_dict() for c in self.comparisons],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def cell(self, train_key: str, test_language: str, feature_set: str) -> CellResult:
        for c in self.cells:
            if (
                c.spec.train_key == train_key
                and c.spec.test_language == test_language
                and c.spec.feature_set == feature_set
            ):
                return c
        raise KeyError((train_key, test_language, feature_set))


def run_matrix(config: ExperimentConfig) -> ExperimentReport:
    """Run every cell of the grid, isolating per-cell failures."""
    config.validate()
    data = ExperimentData(config)
    specs = enumerate_cells(config)

    threads = config.threads
    if threads is None:
        threads = min(8, os.cpu_count() or 1)
    if threads == 1:
        results = [run_cell(data, spec) for spec in specs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda s: run_cell(data, s), specs))
    results.sort(key=lambda c: c.spec.sort_key())

    comparisons = default_comparisons(config, results)
    generated_at = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return ExperimentReport(
        config=config, cells=results, comparisons=comparisons, generated_at=generated_at
    )


def render_report(report: ExperimentReport) -> str:
    """Accuracy tables per test language, rows grouped by train-set size."""
    config = report.config
    lines: list[str] = []
    feature_sets = list(config.feature_sets)
    row_keys: list[str] = []
    for cell in report.cells:
        if cell.spec.train_key not in row_keys:
            row_keys.append(cell.spec.train_key)
    row_keys.sort(key=lambda key: (key.count("+"), key))

    def fmt(cell: CellResult | None) -> str:
        if cell is None:
            return "-"
        if cell.status == "ok":
            return f"{100.0 * cell.accuracy:.3f}"
        return cell.status

    width = max([len(k) for k in row_keys] + [10])
    for test_lang in config.study_languages:
        lines.append(f"test language: {test_lang}")
        header = "train".ljust(width) + "".join(f"{fs:>16}" for fs in feature_sets)
        lines.append(header)
        lines.append("-" * len(header))
        last_group = None
        for key in row_keys:
            group = key.count("+")
            if last_group is not None and group != last_group:
                lines.append("")
            last_group = group
            row = [key.ljust(width)]
            for fs in feature_sets:
                try:
                    cell = report.cell(key, test_lang, fs)
                except KeyError:
                    cell = None
                row.append(f"{fmt(cell):>16}")
            lines.append("".join(row))
        lines.append("")

    if report.comparisons:
        lines.append("significance")
        lines.append("-" * 12)
        for comp in report.comparisons:
            if comp.status == "ok" and comp.result is not None:
                lines.append(
                    f"{comp.name}: t = {comp.result.statistic:.3f}, "
                    f"df = {comp.result.df:.1f}, p = {comp.result.p_value:.4f} "
                    f"({'paired' if comp.result.paired else 'welch'}, "
                    f"n = {comp.n_pairs})"
                )
            else:
                lines.append(f"{comp.name}: skipped ({comp.note})")
        lines.append("")
    return "\n".join(lines)
