"""Grade-level prediction for texts in related Philippine languages.

Ingests graded story corpora, measures how much orthographic material
the languages share, extracts surface and cross-lingual features, and
trains small random-forest graders whose every random draw is pinned to
an explicit seed.
"""

from __future__ import annotations

from .corpus import (
    Corpus,
    CorpusError,
    Document,
    GradeStats,
    corpus_stats,
    load_corpus,
    normalize_text,
    split_sentences,
)
from .errors import CrossreadError, ValidationError
from .features import (
    EmbeddingTable,
    FeatureError,
    FeatureMatrix,
    assemble,
    crossngo_features,
    load_embeddings,
    trad_features,
)
from .intelligibility import (
    GeneticDistance,
    RelationCategory,
    Wordlist,
    WordlistError,
    classify_distance,
    consonant_skeleton,
    genetic_distance,
    load_wordlist,
    relatedness_report,
)
from .ngram import (
    NgramError,
    NgramProfile,
    OverlapMatrix,
    build_profile,
    overlap_matrix,
    rbo,
)
from .orthography import (
    OrthographyError,
    consonant_clusters,
    cv_skeleton,
    syllabify,
    syllable_patterns,
)

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "CorpusError",
    "Document",
    "GradeStats",
    "corpus_stats",
    "load_corpus",
    "normalize_text",
    "split_sentences",
    "CrossreadError",
    "ValidationError",
    "EmbeddingTable",
    "FeatureError",
    "FeatureMatrix",
    "assemble",
    "crossngo_features",
    "load_embeddings",
    "trad_features",
    "GeneticDistance",
    "RelationCategory",
    "Wordlist",
    "WordlistError",
    "classify_distance",
    "consonant_skeleton",
    "genetic_distance",
    "load_wordlist",
    "relatedness_report",
    "NgramError",
    "NgramProfile",
    "OverlapMatrix",
    "build_profile",
    "overlap_matrix",
    "rbo",
    "OrthographyError",
    "consonant_clusters",
    "cv_skeleton",
    "syllabify",
    "syllable_patterns",
    "__version__",
]
