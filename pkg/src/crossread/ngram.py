"""Character n-gram profiles and rank-biased overlap between them.

Profiles are ranked lists of within-token character n-grams.  Two
profiles are compared with rank-biased overlap (RBO), a top-weighted
similarity over ranked lists, so languages sharing their most frequent
character sequences score high even where the long tails differ.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .corpus import Corpus, Document
from .errors import ValidationError

DEFAULT_TOP_FRACTION = 0.25
DEFAULT_PERSISTENCE = 0.9


class NgramError(ValidationError):
    """Raised for invalid profile parameters or malformed ranked lists."""


def token_ngrams(token: str, n: int) -> list[str]:
    """All character n-grams inside one token (none span token breaks)."""
    return [token[i : i + n] for i in range(len(token) - n + 1)]


def count_ngrams(documents: Iterable[Document], n: int) -> Counter[str]:
    counts: Counter[str] = Counter()
    for doc in documents:
        for token in doc.tokens:
            counts.update(token_ngrams(token, n))
    return counts


def unique_ngrams(document: Document, n: int) -> frozenset[str]:
    """Distinct n-grams of one document, for overlap-style features."""
    grams: set[str] = set()
    for token in document.tokens:
        grams.update(token_ngrams(token, n))
    return frozenset(grams)


@dataclass(frozen=True)
class NgramProfile:
    """Ranked n-gram list for one language.

    `entries` is ordered by count descending, ties broken
    lexicographically, already truncated to the top fraction of types.
    """

    language: str
    n: int
    top_fraction: float
    entries: tuple[tuple[str, int], ...]

    @property
    def grams(self) -> list[str]:
        return [g for g, _ in self.entries]

    @property
    def gram_set(self) -> frozenset[str]:
        return frozenset(g for g, _ in self.entries)


def _validate_profile_params(n: int, top_fraction: float) -> None:
    if not isinstance(n, int) or n < 1:
        raise NgramError("invalid-ngram-order", f"n must be a positive integer, got {n!r}")
    if not 0.0 < top_fraction <= 1.0:
        raise NgramError(
            "invalid-top-fraction",
            f"top_fraction must be in (0, 1], got {top_fraction!r}",
        )


def build_profile(
    documents: Corpus | Iterable[Document],
    n: int,
    top_fraction: float = DEFAULT_TOP_FRACTION,
    language: str | None = None,
) -> NgramProfile:
    """Count, rank and truncate the n-grams of a document collection.

    Keeps ceil(top_fraction * distinct types) entries.  An empty
    document collection yields an empty profile.
    """
    _validate_profile_params(n, top_fraction)
    if isinstance(documents, Corpus):
        if language is None:
            language = documents.language
        documents = documents.documents
    if language is None:
        raise NgramError("missing-language", "profile needs a language label")
    counts = count_ngrams(documents, n)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    keep = math.ceil(top_fraction * len(ranked))
    return NgramProfile(
        language=language,
        n=n,
        top_fraction=top_fraction,
        entries=tuple(ranked[:keep]),
    )


def rbo(a: Sequence, b: Sequence, p: float = DEFAULT_PERSISTENCE) -> float:
    """Rank-biased overlap of two ranked lists, truncated at the shorter.

    With persistence p in (0, 1) this is the extrapolated form: the
    agreement at the deepest shared rank carries the weight of the
    unseen tail.  p = 1 degenerates to the unweighted mean overlap
    proportion across depths.  Items must be distinct within each list.
    """
    if not 0.0 < p <= 1.0:
        raise NgramError("invalid-persistence", f"p must be in (0, 1], got {p!r}")
    for name, lst in (("first", a), ("second", b)):
        if len(set(lst)) != len(lst):
            raise NgramError("duplicate-items", f"{name} list has duplicate items")
    k = min(len(a), len(b))
    if k == 0:
        return 1.0 if not a and not b else 0.0
    if list(a[:k]) == list(b[:k]):
        # full agreement at every depth; the weighted sum is exactly 1,
        # so skip the summation and its rounding error
        return 1.0

    seen_a: set = set()
    seen_b: set = set()
    overlap = 0
    agreements: list[int] = []
    for d in range(k):
        xa, xb = a[d], b[d]
        if xa == xb:
            overlap += 1
        else:
            if xa in seen_b:
                overlap += 1
            if xb in seen_a:
                overlap += 1
        seen_a.add(xa)
        seen_b.add(xb)
        agreements.append(overlap)

    if p == 1.0:
        return sum(x / (d + 1) for d, x in enumerate(agreements)) / k
    tail = sum((x / (d + 1)) * p ** (d + 1) for d, x in enumerate(agreements))
    return (agreements[-1] / k) * p**k + ((1.0 - p) / p) * tail


@dataclass(frozen=True)
class OverlapMatrix:
    languages: tuple[str, ...]
    n: int
    p: float
    values: np.ndarray

    def pair(self, lang_a: str, lang_b: str) -> float:
        i = self.languages.index(lang_a)
        j = self.languages.index(lang_b)
        return float(self.values[i, j])


def overlap_matrix(profiles: Sequence[NgramProfile], p: float = DEFAULT_PERSISTENCE) -> OverlapMatrix:
    """Pairwise RBO between profiles of the same n.

    The diagonal is exactly 1.0 and the matrix is symmetric by
    construction.
    """
    if not 0.0 < p <= 1.0:
        raise NgramError("invalid-persistence", f"p must be in (0, 1], got {p!r}")
    if not profiles:
        raise NgramError("no-profiles", "need at least one profile")
    orders = {prof.n for prof in profiles}
    if len(orders) != 1:
        raise NgramError("mixed-ngram-order", f"profiles mix n-gram orders {sorted(orders)}")
    languages = tuple(prof.language for prof in profiles)
    if len(set(languages)) != len(languages):
        raise NgramError("duplicate-language", "profiles repeat a language")

    m = len(profiles)
    values = np.eye(m, dtype=np.float64)
    ranked = [prof.grams for prof in profiles]
    for i in range(m):
        for j in range(i + 1, m):
            score = rbo(ranked[i], ranked[j], p)
            values[i, j] = score
            values[j, i] = score
    return OverlapMatrix(languages=languages, n=profiles[0].n, p=p, values=values)
