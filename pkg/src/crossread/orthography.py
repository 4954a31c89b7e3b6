"""Orthographic analysis: CV skeletons, syllabification, consonant clusters.

Words are parsed into orthographic units first: single letters, except
that ``ng`` forms one unit when the digraph convention is on (the
default for Philippine-language text; turn it off for control languages
like English).  Vowels are a e i o u including their accented forms;
every other letter unit is a consonant.
"""

from __future__ import annotations

import unicodedata

from .errors import ValidationError

# Syllable shapes tracked as readability features, in canonical order.
SYLLABLE_TEMPLATES = (
    "v", "cv", "vc", "cvc", "vcc", "ccv", "cvcc", "ccvc", "ccvcc", "ccvccc",
)

_VOWEL_BASES = frozenset("aeiou")


class OrthographyError(ValidationError):
    """Raised for words the syllabifier cannot handle (e.g. no vowel)."""


def _base_char(ch: str) -> str:
    decomposed = unicodedata.normalize("NFD", ch)
    for part in decomposed:
        if not unicodedata.combining(part):
            return part
    return ch


def is_vowel(unit: str) -> bool:
    return len(unit) == 1 and _base_char(unit) in _VOWEL_BASES


def parse_units(word: str, digraph: bool = True) -> list[str]:
    """Split a lowercase word into orthographic units."""
    word = word.lower()
    units: list[str] = []
    i = 0
    while i < len(word):
        if digraph and word[i : i + 2] == "ng":
            units.append("ng")
            i += 2
        else:
            units.append(word[i])
            i += 1
    return units


def cv_skeleton(word: str, digraph: bool = True) -> str:
    """Consonant/vowel pattern of the whole word, one letter per unit."""
    return "".join("v" if is_vowel(u) else "c" for u in parse_units(word, digraph))


def _syllable_units(word: str, digraph: bool = True) -> list[list[str]]:
    units = parse_units(word, digraph)
    if not units:
        raise OrthographyError("empty-word", "cannot syllabify an empty word")
    nuclei = [i for i, u in enumerate(units) if is_vowel(u)]
    if not nuclei:
        raise OrthographyError("no-vowel-word", f"word {word!r} has no vowel nucleus")

    # One syllable per nucleus.  An intervocalic consonant run is split
    # so the next syllable gets a one-consonant onset, or a two-consonant
    # onset when the run has three or more units; the rest closes the
    # preceding syllable.  Word-initial and word-final runs attach whole.
    boundaries: list[int] = [0]
    for prev, nxt in zip(nuclei, nuclei[1:]):
        run = nxt - prev - 1
        onset = 1 if run <= 2 else 2
        boundaries.append(nxt - min(onset, run))
    boundaries.append(len(units))
    return [units[a:b] for a, b in zip(boundaries, boundaries[1:])]


def syllabify(word: str, digraph: bool = True) -> list[str]:
    """Surface syllables of `word`.

    Raises OrthographyError for words without a vowel nucleus.
    """
    return ["".join(syl) for syl in _syllable_units(word, digraph)]


def syllable_patterns(word: str, digraph: bool = True) -> list[str]:
    """CV pattern of each syllable, e.g. "sastre" -> ["cvc", "ccv"]."""
    return [
        "".join("v" if is_vowel(u) else "c" for u in syl)
        for syl in _syllable_units(word, digraph)
    ]


def consonant_clusters(word: str, digraph: bool = True) -> int:
    """Number of maximal runs of 2+ consonant units anywhere in the word.

    The ng digraph is a single unit, so "ngang" has no cluster.
    """
    clusters = 0
    run = 0
    for unit in parse_units(word, digraph):
        if is_vowel(unit):
            if run >= 2:
                clusters += 1
            run = 0
        else:
            run += 1
    if run >= 2:
        clusters += 1
    return clusters
