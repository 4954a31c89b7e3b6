"""Document feature extraction and matrix assembly.

Three feature groups:

- trad: surface statistics (counts, lengths, syllable shape densities)
- crossngo: for each reference language, the share of a document's
  distinct character n-grams found in that language's top n-gram list
- emb: pretrained sentence embeddings ingested from CSV (this package
  never runs a neural model; see the companion exporter)

`assemble` concatenates the selected groups into one matrix with rows
sorted by (language, doc id).
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import Corpus, Document
from .errors import ValidationError
from .ngram import NgramProfile, unique_ngrams
from .orthography import (
    SYLLABLE_TEMPLATES,
    OrthographyError,
    consonant_clusters,
    syllable_patterns,
)

EMBED_DIM = 768
REFERENCE_LANGUAGES = ("tgl", "bcl", "ceb")
CROSSNGO_ORDERS = (2, 3)
DEFAULT_DIGRAPH_OFF = frozenset(("eng",))

# A word counts as polysyllabic only above this many syllables.
POLYSYLLABLE_THRESHOLD = 5

TRAD_FEATURE_NAMES = (
    "word_count",
    "phrase_count",
    "sentence_count",
    "avg_word_len",
    "avg_sentence_len",
    "avg_syllables_per_word",
    "polysyllable_count",
    "consonant_cluster_density",
) + tuple(f"density_{t}" for t in SYLLABLE_TEMPLATES)

FEATURE_SETS = ("TRAD", "TRAD_CROSSNGO", "EMB", "ALL")


class FeatureError(ValidationError):
    """Raised for malformed embeddings, schemas, or unusable documents."""


def crossngo_feature_names(
    reference_langs: Sequence[str] = REFERENCE_LANGUAGES,
    orders: Sequence[int] = CROSSNGO_ORDERS,
) -> tuple[str, ...]:
    return tuple(f"crossngo_{n}_{lang}" for n in orders for lang in reference_langs)


def embedding_feature_names(dim: int = EMBED_DIM) -> tuple[str, ...]:
    return tuple(f"emb_{i}" for i in range(dim))


def trad_features(document: Document, digraph: bool = True) -> np.ndarray:
    """The 18 surface readability statistics of one document.

    Words without a vowel fall out of the syllable-based statistics but
    still count toward word count, word length and cluster density.  A
    document where no word syllabifies is unusable.
    """
    tokens = document.tokens
    word_count = len(tokens)
    sentence_count = len(document.sentences)

    syllable_counts: list[int] = []
    pattern_tally = {t: 0 for t in SYLLABLE_TEMPLATES}
    total_syllables = 0
    cluster_total = 0
    for token in tokens:
        cluster_total += consonant_clusters(token, digraph)
        try:
            patterns = syllable_patterns(token, digraph)
        except OrthographyError:
            continue
        syllable_counts.append(len(patterns))
        total_syllables += len(patterns)
        for pat in patterns:
            if pat in pattern_tally:
                pattern_tally[pat] += 1
    if not syllable_counts:
        raise FeatureError(
            "unsyllabifiable-document",
            f"document {document.id!r} has no syllabifiable word",
        )

    values = [
        float(word_count),
        float(document.phrases),
        float(sentence_count),
        sum(len(t) for t in tokens) / word_count,
        word_count / sentence_count,
        total_syllables / len(syllable_counts),
        float(sum(1 for c in syllable_counts if c > POLYSYLLABLE_THRESHOLD)),
        cluster_total / word_count,
    ]
    values.extend(pattern_tally[t] / total_syllables for t in SYLLABLE_TEMPLATES)
    return np.array(values, dtype=np.float64)


def crossngo_features(
    document: Document,
    profiles: Mapping[tuple[str, int], NgramProfile],
    reference_langs: Sequence[str] = REFERENCE_LANGUAGES,
    orders: Sequence[int] = CROSSNGO_ORDERS,
) -> np.ndarray:
    """Overlap of the document's distinct n-grams with each top list.

    A document with no n-grams of some order, or an empty reference
    profile, contributes 0 for the affected columns.
    """
    values: list[float] = []
    for n in orders:
        doc_grams = unique_ngrams(document, n)
        for lang in reference_langs:
            try:
                profile = profiles[(lang, n)]
            except KeyError:
                raise FeatureError(
                    "missing-profile", f"no profile for language {lang!r}, n={n}"
                ) from None
            if not doc_grams:
                values.append(0.0)
                continue
            values.append(len(doc_grams & profile.gram_set) / len(doc_grams))
    return np.array(values, dtype=np.float64)


@dataclass(frozen=True)
class EmbeddingTable:
    dim: int
    vectors: dict[str, np.ndarray]

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self.vectors


def load_embeddings(paths: str | Path | Sequence[str | Path]) -> EmbeddingTable:
    """Read one or more embedding CSVs (`id,e0,...,e767`) into a table.

    Rows must be 768-dimensional, finite, and unique by id across all
    files.
    """
    if isinstance(paths, (str, Path)):
        paths = [paths]
    expected_header = ["id"] + [f"e{i}" for i in range(EMBED_DIM)]
    vectors: dict[str, np.ndarray] = {}
    for path in paths:
        path = Path(path)
        try:
            with path.open(newline="", encoding="utf-8") as fh:
                reader = csv.reader(fh)
                header = next(reader, None)
                if header != expected_header:
                    raise FeatureError(
                        "malformed-embeddings",
                        f"{path}: header must be id,e0,...,e{EMBED_DIM - 1}",
                    )
                for lineno, row in enumerate(reader, start=2):
                    if not row:
                        continue
                    if len(row) != EMBED_DIM + 1:
                        raise FeatureError(
                            "malformed-embeddings",
                            f"{path} line {lineno}: expected {EMBED_DIM + 1} fields, "
                            f"got {len(row)}",
                        )
                    doc_id = row[0].strip()
                    if doc_id in vectors:
                        raise FeatureError(
                            "duplicate-id", f"{path} line {lineno}: duplicate id {doc_id!r}"
                        )
                    try:
                        vec = np.array([float(v) for v in row[1:]], dtype=np.float64)
                    except ValueError:
                        raise FeatureError(
                            "malformed-embeddings",
                            f"{path} line {lineno}: non-numeric value",
                        ) from None
                    if not np.isfinite(vec).all():
                        raise FeatureError(
                            "malformed-embeddings",
                            f"{path} line {lineno}: non-finite value",
                        )
                    vectors[doc_id] = vec
        except OSError as exc:
            raise FeatureError(
                "missing-file", f"cannot read embeddings {path}: {exc}"
            ) from exc
    return EmbeddingTable(dim=EMBED_DIM, vectors=vectors)


def schema_fingerprint(names: Sequence[str], groups: Sequence[str]) -> str:
    """Short stable digest of a feature schema."""
    blob = json.dumps(
        {"names": list(names), "groups": list(groups)}, separators=(",", ":")
    )
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class FeatureMatrix:
    feature_names: tuple[str, ...]
    feature_groups: tuple[str, ...]
    doc_ids: tuple[str, ...]
    languages: tuple[str, ...]
    labels: np.ndarray
    values: np.ndarray

    def fingerprint(self) -> str:
        return schema_fingerprint(self.feature_names, self.feature_groups)

    def select(self, indices: Sequence[int]) -> "FeatureMatrix":
        idx = list(indices)
        return FeatureMatrix(
            feature_names=self.feature_names,
            feature_groups=self.feature_groups,
            doc_ids=tuple(self.doc_ids[i] for i in idx),
            languages=tuple(self.languages[i] for i in idx),
            labels=self.labels[idx],
            values=self.values[idx],
        )

    def sorted_by_key(self) -> "FeatureMatrix":
        order = sorted(
            range(len(self.doc_ids)),
            key=lambda i: (self.languages[i], self.doc_ids[i]),
        )
        return self.select(order)

    def concat(self, other: "FeatureMatrix") -> "FeatureMatrix":
        if self.feature_names != other.feature_names:
            raise FeatureError("schema-mismatch", "cannot concat differing schemas")
        return FeatureMatrix(
            feature_names=self.feature_names,
            feature_groups=self.feature_groups,
            doc_ids=self.doc_ids + other.doc_ids,
            languages=self.languages + other.languages,
            labels=np.concatenate([self.labels, other.labels]),
            values=np.vstack([self.values, other.values]),
        )


def assemble(
    corpora: Sequence[Corpus],
    selector: str,
    profiles: Mapping[tuple[str, int], NgramProfile] | None = None,
    embeddings: EmbeddingTable | None = None,
    reference_langs: Sequence[str] = REFERENCE_LANGUAGES,
    digraph_off: frozenset[str] = DEFAULT_DIGRAPH_OFF,
    documents: Iterable[Document] | None = None,
) -> FeatureMatrix:
    """Build the feature matrix for `selector` over all corpus documents.

    selector is one of TRAD, TRAD_CROSSNGO, EMB, ALL.  `documents`
    restricts the matrix to a subset (still sorted by language and id).
    """
    if selector not in FEATURE_SETS:
        raise FeatureError(
            "unknown-feature-set",
            f"selector must be one of {FEATURE_SETS}, got {selector!r}",
        )
    want_trad = selector in ("TRAD", "TRAD_CROSSNGO", "ALL")
    want_crossngo = selector in ("TRAD_CROSSNGO", "ALL")
    want_emb = selector in ("EMB", "ALL")
    if want_crossngo and profiles is None:
        raise FeatureError("missing-profiles", f"selector {selector} needs n-gram profiles")
    if want_emb and embeddings is None:
        raise FeatureError("missing-embeddings", f"selector {selector} needs embeddings")

    if documents is None:
        docs = [doc for corpus in corpora for doc in corpus.documents]
    else:
        docs = list(documents)
    docs.sort(key=lambda d: (d.language, d.id))
    seen: set[str] = set()
    for doc in docs:
        if doc.id in seen:
            raise FeatureError("duplicate-id", f"duplicate document id {doc.id!r}")
        seen.add(doc.id)

    names: list[str] = []
    groups: list[str] = []
    if want_trad:
        names.extend(TRAD_FEATURE_NAMES)
        groups.extend(["trad"] * len(TRAD_FEATURE_NAMES))
    if want_crossngo:
        xnames = crossngo_feature_names(reference_langs)
        names.extend(xnames)
        groups.extend(["crossngo"] * len(xnames))
    if want_emb:
        enames = embedding_feature_names()
        names.extend(enames)
        groups.extend(["emb"] * len(enames))

    rows: list[np.ndarray] = []
    for doc in docs:
        parts: list[np.ndarray] = []
        if want_trad:
            parts.append(trad_features(doc, digraph=doc.language not in digraph_off))
        if want_crossngo:
            assert profiles is not None
            parts.append(crossngo_features(doc, profiles, reference_langs))
        if want_emb:
            assert embeddings is not None
            if doc.id not in embeddings:
                raise FeatureError(
                    "missing-embedding", f"no embedding row for document {doc.id!r}"
                )
            parts.append(embeddings.vectors[doc.id])
        rows.append(np.concatenate(parts))

    return FeatureMatrix(
        feature_names=tuple(names),
        feature_groups=tuple(groups),
        doc_ids=tuple(d.id for d in docs),
        languages=tuple(d.language for d in docs),
        labels=np.array([d.grade for d in docs], dtype=np.int64),
        values=np.vstack(rows) if rows else np.zeros((0, len(names))),
    )


def save_matrix(matrix: FeatureMatrix, csv_path: str | Path) -> None:
    """Write the matrix as CSV plus a .schema.json sidecar."""
    csv_path = Path(csv_path)
    with csv_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["doc_id", "language", "grade", *matrix.feature_names])
        for i, doc_id in enumerate(matrix.doc_ids):
            writer.writerow(
                [
                    doc_id,
                    matrix.languages[i],
                    int(matrix.labels[i]),
                    *[repr(float(v)) for v in matrix.values[i]],
                ]
            )
    sidecar = {
        "feature_names": list(matrix.feature_names),
        "feature_groups": list(matrix.feature_groups),
        "schema_fingerprint": matrix.fingerprint(),
    }
    schema_path = csv_path.with_suffix(csv_path.suffix + ".schema.json")
    schema_path.write_text(
        json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def load_matrix(csv_path: str | Path) -> FeatureMatrix:
    csv_path = Path(csv_path)
    schema_path = csv_path.with_suffix(csv_path.suffix + ".schema.json")
    try:
        sidecar = json.loads(schema_path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise FeatureError(
            "missing-file", f"cannot read schema sidecar {schema_path}: {exc}"
        ) from exc
    names = tuple(sidecar["feature_names"])
    groups = tuple(sidecar["feature_groups"])
    doc_ids: list[str] = []
    languages: list[str] = []
    labels: list[int] = []
    rows: list[list[float]] = []
    try:
        with csv_path.open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != ["doc_id", "language", "grade", *names]:
                raise FeatureError(
                    "schema-mismatch", f"{csv_path}: header does not match sidecar schema"
                )
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != 3 + len(names):
                    raise FeatureError(
                        "malformed-row",
                        f"{csv_path} line {lineno}: wrong field count",
                    )
                doc_ids.append(row[0])
                languages.append(row[1])
                labels.append(int(row[2]))
                rows.append([float(v) for v in row[3:]])
    except OSError as exc:
        raise FeatureError("missing-file", f"cannot read matrix {csv_path}: {exc}") from exc
    fingerprint = schema_fingerprint(names, groups)
    if fingerprint != sidecar.get("schema_fingerprint"):
        raise FeatureError(
            "schema-mismatch", f"{schema_path}: fingerprint does not match its own schema"
        )
    return FeatureMatrix(
        feature_names=names,
        feature_groups=groups,
        doc_ids=tuple(doc_ids),
        languages=tuple(languages),
        labels=np.array(labels, dtype=np.int64),
        values=np.array(rows, dtype=np.float64)
        if rows
        else np.zeros((0, len(names))),
    )
