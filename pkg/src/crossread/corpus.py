"""Corpus ingestion: manifest loading, normalization, sentence splitting.

A corpus is a set of graded documents in a single language, described by a
tab-separated manifest with columns ``id``, ``language``, ``grade`` and
either ``text_path`` (relative to the manifest) or an inline ``text``
column.  Documents are normalized once at load time; all downstream
feature code works from the token stream stored here.
"""

from __future__ import annotations

import csv
import html
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import ValidationError

GRADE_LEVELS = (1, 2, 3)

_LANGUAGE_RE = re.compile(r"^[a-z]{3}$")
_SENTENCE_END_RE = re.compile(r"[.!?…]+")
# Commas, semicolons, colons and dashes delimit phrases within a sentence.
_PHRASE_BREAK_RE = re.compile(r"[,;:‐-―-]+")
_WS_RE = re.compile(r"\s+")

_MANIFEST_COLUMNS = ("id", "language", "grade")


class CorpusError(ValidationError):
    """Raised for unreadable manifests or invalid rows."""


def normalize_text(raw: str, strip_entities: bool = True) -> str:
    """Lowercase `raw` and reduce it to space-separated alphabetic tokens.

    HTML entities are decoded first (so ``&nbsp;`` becomes plain
    whitespace) unless `strip_entities` is False, in which case entity
    strings survive as letter runs exactly as they appear in scraped
    text.  Digits and punctuation become spaces; letters keep their
    diacritics.  The function is idempotent.
    """
    if strip_entities:
        raw = html.unescape(raw)
    lowered = raw.lower()
    kept = [ch if ch.isalpha() else " " for ch in lowered]
    return _WS_RE.sub(" ", "".join(kept)).strip()


def split_sentences(raw: str) -> list[str]:
    """Split on terminal punctuation (. ! ? and ellipses).

    Runs of terminators count once.  Text without any terminator is a
    single sentence.  Empty segments are dropped.
    """
    parts = _SENTENCE_END_RE.split(raw)
    return [p.strip() for p in parts if p.strip()]


def count_phrases(sentence: str) -> int:
    """Number of phrase segments in one raw sentence.

    A segment counts only if it contains at least one letter, so
    punctuation runs do not create empty phrases.
    """
    segments = _PHRASE_BREAK_RE.split(sentence)
    return sum(1 for seg in segments if any(ch.isalpha() for ch in seg))


def parse_language(value: str) -> str:
    code = value.strip().lower()
    if not _LANGUAGE_RE.match(code):
        raise CorpusError(
            "invalid-language",
            f"language code must be 3 ASCII letters, got {value!r}",
        )
    return code


def parse_grade(value: str | int) -> int:
    try:
        grade = int(str(value).strip())
    except ValueError:
        raise CorpusError("invalid-grade", f"grade is not an integer: {value!r}") from None
    if grade not in GRADE_LEVELS:
        raise CorpusError(
            "invalid-grade",
            f"grade must be one of {GRADE_LEVELS}, got {grade}",
        )
    return grade


@dataclass(frozen=True)
class Document:
    """One normalized document.

    `sentences` holds the token lists of each non-empty sentence;
    `phrases` is the total phrase count over those sentences.
    """

    id: str
    language: str
    grade: int
    raw_text: str
    sentences: tuple[tuple[str, ...], ...]
    phrases: int

    @property
    def tokens(self) -> list[str]:
        return [tok for sent in self.sentences for tok in sent]


@dataclass(frozen=True)
class Corpus:
    language: str
    documents: tuple[Document, ...]

    def __len__(self) -> int:
        return len(self.documents)

    def by_grade(self, grade: int) -> list[Document]:
        return [d for d in self.documents if d.grade == grade]


def build_document(
    doc_id: str,
    language: str,
    grade: int,
    raw_text: str,
    strip_entities: bool = True,
) -> Document:
    """Normalize one text into a Document.

    Raises CorpusError("empty-document") when no sentence yields a token.
    """
    material = html.unescape(raw_text) if strip_entities else raw_text
    sentences: list[tuple[str, ...]] = []
    phrases = 0
    for sent_raw in split_sentences(material):
        tokens = normalize_text(sent_raw, strip_entities=False).split()
        if not tokens:
            continue
        sentences.append(tuple(tokens))
        phrases += count_phrases(sent_raw)
    if not sentences:
        raise CorpusError("empty-document", f"document {doc_id!r} has no tokens")
    return Document(
        id=doc_id,
        language=language,
        grade=grade,
        raw_text=raw_text,
        sentences=tuple(sentences),
        phrases=phrases,
    )


def _read_manifest_rows(manifest_path: Path) -> tuple[list[str], list[list[str]]]:
    try:
        with manifest_path.open(newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh, delimiter="\t"))
    except OSError as exc:
        raise CorpusError("missing-file", f"cannot read manifest {manifest_path}: {exc}") from exc
    if not rows:
        raise CorpusError("empty-manifest", f"manifest {manifest_path} is empty")
    return rows[0], rows[1:]


def load_corpus(manifest_path: str | Path, strip_entities: bool = True) -> Corpus:
    """Load and validate a corpus from a TSV manifest.

    Every malformed row, missing text file, duplicate id, invalid grade
    or language, or empty document raises a CorpusError naming the row.
    All rows must share one language.
    """
    manifest_path = Path(manifest_path)
    header, rows = _read_manifest_rows(manifest_path)
    col = {name: i for i, name in enumerate(header)}
    for name in _MANIFEST_COLUMNS:
        if name not in col:
            raise CorpusError("malformed-row", f"manifest header lacks column {name!r}")
    if "text_path" not in col and "text" not in col:
        raise CorpusError(
            "malformed-row", "manifest header needs a text_path or text column"
        )

    documents: list[Document] = []
    seen: set[str] = set()
    language: str | None = None
    for lineno, row in enumerate(rows, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise CorpusError(
                "malformed-row",
                f"{manifest_path} line {lineno}: expected {len(header)} fields, got {len(row)}",
            )
        doc_id = row[col["id"]].strip()
        if not doc_id:
            raise CorpusError("malformed-row", f"{manifest_path} line {lineno}: empty id")
        if doc_id in seen:
            raise CorpusError(
                "duplicate-id", f"{manifest_path} line {lineno}: duplicate id {doc_id!r}"
            )
        try:
            row_language = parse_language(row[col["language"]])
            grade = parse_grade(row[col["grade"]])
        except CorpusError as exc:
            raise CorpusError(exc.code, f"{manifest_path} line {lineno}: {exc}") from None
        if language is None:
            language = row_language
        elif row_language != language:
            raise CorpusError(
                "mixed-language",
                f"{manifest_path} line {lineno}: language {row_language!r} differs "
                f"from corpus language {language!r}",
            )

        raw_text = ""
        if "text_path" in col and row[col["text_path"]].strip():
            text_file = manifest_path.parent / row[col["text_path"]].strip()
            try:
                raw_text = text_file.read_text(encoding="utf-8")
            except OSError as exc:
                raise CorpusError(
                    "missing-text-file",
                    f"{manifest_path} line {lineno}: cannot read {text_file}: {exc}",
                ) from exc
        elif "text" in col:
            raw_text = row[col["text"]]
        if not raw_text.strip():
            raise CorpusError(
                "empty-document", f"{manifest_path} line {lineno}: document {doc_id!r} is empty"
            )
        try:
            doc = build_document(doc_id, row_language, grade, raw_text, strip_entities)
        except CorpusError as exc:
            raise CorpusError(exc.code, f"{manifest_path} line {lineno}: {exc}") from None
        documents.append(doc)
        seen.add(doc_id)

    if not documents:
        raise CorpusError("empty-manifest", f"manifest {manifest_path} has no data rows")
    assert language is not None
    return Corpus(language=language, documents=tuple(documents))


@dataclass(frozen=True)
class GradeStats:
    doc_count: int
    sent_count: int
    vocab_size: int


def corpus_stats(corpus: Corpus) -> dict[int, GradeStats]:
    """Per-grade document, sentence and vocabulary counts.

    Vocabulary is the number of distinct tokens across all documents of
    the grade.  All grade levels appear in the result, zeroed when the
    corpus has no documents at that level.
    """
    stats: dict[int, GradeStats] = {}
    for grade in GRADE_LEVELS:
        docs = corpus.by_grade(grade)
        vocab: set[str] = set()
        sent_count = 0
        for doc in docs:
            sent_count += len(doc.sentences)
            vocab.update(doc.tokens)
        stats[grade] = GradeStats(
            doc_count=len(docs), sent_count=sent_count, vocab_size=len(vocab)
        )
    return stats
