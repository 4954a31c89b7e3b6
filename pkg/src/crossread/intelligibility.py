"""Genetic distance between languages from aligned concept wordlists.

Each concept's translations are reduced to consonant skeletons; the
share of concepts whose skeletons match exactly gives a percentage
distance, which maps onto coarse relatedness bands.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from pathlib import Path

from .corpus import normalize_text, parse_language
from .errors import ValidationError
from .orthography import is_vowel, parse_units

DEFAULT_DIGRAPH_OFF = frozenset(("eng",))

# ng collapses to a single symbol so the digraph is one consonant slot.
_NG_SYMBOL = "ŋ"


class WordlistError(ValidationError):
    """Raised for malformed wordlist files or empty comparisons."""


class RelationCategory(Enum):
    HIGHLY_RELATED = "highly related"
    RELATED = "related"
    REMOTELY_RELATED = "remotely related"
    VERY_REMOTELY_RELATED = "very remotely related"
    NO_RECOGNIZABLE_RELATIONSHIP = "no recognizable relationship"


# Band lower bounds, inclusive; each band ends where the next begins.
_BANDS = (
    (78.0, RelationCategory.NO_RECOGNIZABLE_RELATIONSHIP),
    (70.0, RelationCategory.VERY_REMOTELY_RELATED),
    (50.0, RelationCategory.REMOTELY_RELATED),
    (30.0, RelationCategory.RELATED),
    (1.0, RelationCategory.HIGHLY_RELATED),
)


def consonant_skeleton(word: str, digraph: bool = True) -> str:
    """Consonants of `word` in order, with the ng digraph as one symbol."""
    out: list[str] = []
    for unit in parse_units(word, digraph):
        if is_vowel(unit):
            continue
        out.append(_NG_SYMBOL if unit == "ng" else unit)
    return "".join(out)


@dataclass(frozen=True)
class Classification:
    category: RelationCategory
    note: str | None = None


def classify_distance(distance: float) -> Classification:
    """Map a percentage distance onto a relatedness band.

    Distances below 1 still classify as highly related, with a note that
    the wordlists are effectively those of a single language.
    """
    if not 0.0 <= distance <= 100.0:
        raise WordlistError(
            "invalid-distance", f"distance must be within [0, 100], got {distance!r}"
        )
    if distance < 1.0:
        return Classification(
            RelationCategory.HIGHLY_RELATED,
            "distance below 1: effectively the same language",
        )
    for lower, category in _BANDS:
        if distance >= lower:
            return Classification(category)
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class GeneticDistance:
    distance: float
    concepts_compared: int
    concepts_matched: int


def genetic_distance(
    words_a: dict[str, str],
    words_b: dict[str, str],
    digraph_a: bool = True,
    digraph_b: bool = True,
) -> GeneticDistance:
    """Percentage of shared concepts whose consonant skeletons differ.

    Only concepts with a translation on both sides are compared; there
    must be at least one.
    """
    shared = sorted(
        c for c in words_a.keys() & words_b.keys() if words_a[c] and words_b[c]
    )
    if not shared:
        raise WordlistError(
            "no-comparable-concepts", "wordlists share no filled-in concepts"
        )
    matched = sum(
        1
        for c in shared
        if consonant_skeleton(words_a[c], digraph_a)
        == consonant_skeleton(words_b[c], digraph_b)
    )
    # (n - m)/n rather than 1 - m/n: exact when the percentage is
    # representable, so band edges like 30.0 land on the boundary
    distance = 100.0 * (len(shared) - matched) / len(shared)
    return GeneticDistance(
        distance=distance, concepts_compared=len(shared), concepts_matched=matched
    )


@dataclass(frozen=True)
class Wordlist:
    """Aligned concept translations; empty cells mean "not filled in"."""

    concepts: tuple[str, ...]
    languages: tuple[str, ...]
    words: dict[tuple[str, str], str]

    def column(self, language: str) -> dict[str, str]:
        return {c: self.words[(c, language)] for c in self.concepts}


def load_wordlist(path: str | Path) -> Wordlist:
    """Read a TSV wordlist: header `concept` then language code columns."""
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh, delimiter="\t"))
    except OSError as exc:
        raise WordlistError("missing-file", f"cannot read wordlist {path}: {exc}") from exc
    if not rows:
        raise WordlistError("empty-wordlist", f"wordlist {path} is empty")
    header = rows[0]
    if not header or header[0].strip().lower() != "concept":
        raise WordlistError("malformed-row", f"{path}: first column must be 'concept'")
    try:
        languages = tuple(parse_language(code) for code in header[1:])
    except ValidationError as exc:
        raise WordlistError(exc.code, f"{path}: {exc}") from None
    if len(languages) < 2:
        raise WordlistError("malformed-row", f"{path}: need at least two language columns")
    if len(set(languages)) != len(languages):
        raise WordlistError("duplicate-language", f"{path}: repeated language column")

    concepts: list[str] = []
    words: dict[tuple[str, str], str] = {}
    seen: set[str] = set()
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise WordlistError(
                "malformed-row",
                f"{path} line {lineno}: expected {len(header)} fields, got {len(row)}",
            )
        concept = row[0].strip().lower()
        if not concept:
            raise WordlistError("malformed-row", f"{path} line {lineno}: empty concept")
        if concept in seen:
            raise WordlistError(
                "duplicate-concept", f"{path} line {lineno}: duplicate concept {concept!r}"
            )
        seen.add(concept)
        concepts.append(concept)
        for language, cell in zip(languages, row[1:]):
            words[(concept, language)] = normalize_text(cell)
    if not concepts:
        raise WordlistError("empty-wordlist", f"wordlist {path} has no concept rows")
    return Wordlist(concepts=tuple(concepts), languages=languages, words=words)


@dataclass(frozen=True)
class PairRelatedness:
    language_a: str
    language_b: str
    distance: float
    concepts_compared: int
    concepts_matched: int
    category: RelationCategory
    note: str | None


def relatedness_report(
    wordlist: Wordlist,
    digraph_off: frozenset[str] = DEFAULT_DIGRAPH_OFF,
) -> list[PairRelatedness]:
    """Genetic distance and band for every unordered language pair."""
    results: list[PairRelatedness] = []
    for lang_a, lang_b in combinations(wordlist.languages, 2):
        result = genetic_distance(
            wordlist.column(lang_a),
            wordlist.column(lang_b),
            digraph_a=lang_a not in digraph_off,
            digraph_b=lang_b not in digraph_off,
        )
        verdict = classify_distance(result.distance)
        results.append(
            PairRelatedness(
                language_a=lang_a,
                language_b=lang_b,
                distance=result.distance,
                concepts_compared=result.concepts_compared,
                concepts_matched=result.concepts_matched,
                category=verdict.category,
                note=verdict.note,
            )
        )
    return results
