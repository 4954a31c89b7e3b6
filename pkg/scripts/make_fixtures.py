"""Regenerate the synthetic fixture corpora under fixtures/.

The texts are nonsense stories assembled from per-language syllable
inventories.  The three Philippine-like languages share a large common
core (so their character n-gram profiles overlap heavily) while the
English-like control uses a disjoint inventory.  Sentence length, word
length and cluster rate all grow with the grade so the readability
signal is learnable.

Deterministic: fixed seeds, stable output bytes.  Run from the repo
root:

    python3 scripts/make_fixtures.py
"""

from __future__ import annotations

import json
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

CORE = [
    "ma", "na", "ta", "ka", "sa", "ba", "la", "pa", "ga", "da",
    "an", "ang", "in", "on", "ha", "ya", "wa", "to", "ti", "li",
]

LANGUAGES = {
    "tgl": {
        "seed": 101,
        "docs_per_grade": 12,
        "extra": ["ng", "ay", "si", "iyo", "it", "ako", "ni", "mga"],
        "function_words": ["ang", "ng", "sa", "si", "ay", "at", "na", "ito"],
        "clusters": ["tra", "pri", "pla", "gra"],
    },
    "bcl": {
        "seed": 202,
        "docs_per_grade": 12,
        "extra": ["ron", "sai", "ni", "ar", "ko", "mo", "saro", "ini"],
        "function_words": ["an", "nin", "sa", "si", "asin", "na", "ini", "kan"],
        "clusters": ["tra", "pro", "kla", "bre"],
    },
    "ceb": {
        "seed": 303,
        "docs_per_grade": 12,
        "extra": ["ug", "gi", "ki", "mo", "usa", "ila", "unta", "adto"],
        "function_words": ["ang", "sa", "si", "ug", "nga", "mga", "usa", "kay"],
        "clusters": ["tra", "pru", "kla", "gri"],
    },
    "eng": {
        "seed": 404,
        "docs_per_grade": 10,
        "core": [
            "the", "er", "ing", "ed", "es", "en", "re", "ly", "tion", "ver",
            "ter", "est", "ist", "ment", "ome", "ide", "ake", "ite", "une", "ust",
        ],
        "extra": ["sh", "ch", "th", "wh", "qu", "ck", "ft", "nd"],
        "function_words": ["the", "and", "of", "to", "in", "a", "was", "for"],
        "clusters": ["str", "spr", "thr", "scr"],
    },
}

GRADE_SHAPE = {
    1: {"sentences": (3, 6), "words": (3, 6), "syllables": [1, 1, 2, 2, 3],
        "comma_rate": 0.05, "cluster_rate": 0.03, "bang_rate": 0.1},
    2: {"sentences": (4, 8), "words": (4, 8), "syllables": [1, 2, 2, 3, 3, 4],
        "comma_rate": 0.12, "cluster_rate": 0.07, "bang_rate": 0.15},
    3: {"sentences": (5, 9), "words": (5, 10), "syllables": [2, 2, 3, 3, 4, 5, 6, 7],
        "comma_rate": 0.22, "cluster_rate": 0.12, "bang_rate": 0.2},
}


def make_word(rng: random.Random, spec: dict, grade: int) -> str:
    shape = GRADE_SHAPE[grade]
    inventory = spec.get("core", CORE) + spec["extra"]
    n_syllables = rng.choice(shape["syllables"])
    parts = []
    for i in range(n_syllables):
        if i == 0 and rng.random() < shape["cluster_rate"]:
            parts.append(rng.choice(spec["clusters"]))
        else:
            parts.append(rng.choice(inventory))
    return "".join(parts)


def make_sentence(rng: random.Random, spec: dict, grade: int) -> str:
    shape = GRADE_SHAPE[grade]
    n_words = rng.randint(*shape["words"])
    words = []
    for i in range(n_words):
        if rng.random() < 0.35:
            words.append(rng.choice(spec["function_words"]))
        else:
            words.append(make_word(rng, spec, grade))
    pieces = [words[0].capitalize()]
    for word in words[1:]:
        if rng.random() < shape["comma_rate"]:
            pieces[-1] += ","
        pieces.append(word)
    end = "!" if rng.random() < shape["bang_rate"] else "."
    return " ".join(pieces) + end


def make_document(rng: random.Random, spec: dict, grade: int) -> str:
    shape = GRADE_SHAPE[grade]
    n_sentences = rng.randint(*shape["sentences"])
    return " ".join(make_sentence(rng, spec, grade) for _ in range(n_sentences))


WORDLIST_ROWS = [
    ("eye", "mata", "mata", "mata", "eye"),
    ("water", "tubig", "tubig", "tubig", "water"),
    ("blood", "dugo", "dugo", "dugo", "blood"),
    ("tooth", "ngipin", "ngipon", "ngipon", "tooth"),
    ("star", "bituin", "bitoon", "bituon", "star"),
    ("sky", "langit", "langit", "langit", "sky"),
    ("pig", "baboy", "baboy", "baboy", "pig"),
    ("chicken", "manok", "manok", "manok", "chicken"),
    ("five", "lima", "lima", "lima", "five"),
    ("four", "apat", "apat", "upat", "four"),
    ("tongue", "dila", "dila", "dila", "tongue"),
    ("fish", "isda", "sira", "isda", "fish"),
    ("house", "bahay", "balay", "balay", "house"),
    ("road", "daan", "dalan", "dalan", "road"),
    ("dog", "aso", "ayam", "iro", "dog"),
    ("sun", "araw", "aldaw", "adlaw", "sun"),
    ("moon", "buwan", "bulan", "bulan", "moon"),
    ("rain", "ulan", "uran", "ulan", "rain"),
    ("bird", "ibon", "gamgam", "langgam", "bird"),
    ("ear", "tenga", "talinga", "dalunggan", "ear"),
]


def write_wordlist() -> None:
    lines = ["concept\ttgl\tbcl\tceb\teng"]
    for row in WORDLIST_ROWS:
        lines.append("\t".join(row))
    (FIXTURES / "wordlist.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_config() -> None:
    config = {
        "corpora": {
            "tgl": "tgl.tsv",
            "bcl": "bcl.tsv",
            "ceb": "ceb.tsv",
        },
        "control_languages": [],
        "feature_sets": ["TRAD", "TRAD_CROSSNGO", "EMB", "ALL"],
        "embeddings": None,
        "profile": {"top_fraction": 0.25, "from_full_corpus": False},
        "folds": 5,
        "fold_seed": 1,
        "forest": {"num_trees": 100, "seed": 1},
    }
    (FIXTURES / "config.json").write_text(
        json.dumps(config, indent=2) + "\n", encoding="utf-8"
    )


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)
    for lang, spec in LANGUAGES.items():
        rng = random.Random(spec["seed"])
        lines = ["id\tlanguage\tgrade\ttext"]
        for grade in (1, 2, 3):
            for i in range(spec["docs_per_grade"]):
                doc_id = f"{lang}-g{grade}-{i:02d}"
                text = make_document(rng, spec, grade)
                assert "\t" not in text
                lines.append(f"{doc_id}\t{lang}\t{grade}\t{text}")
        (FIXTURES / f"{lang}.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"wrote {lang}: {len(lines) - 1} documents")
    write_wordlist()
    write_config()
    print("wrote wordlist.tsv and config.json")


if __name__ == "__main__":
    main()
