"""Feature extraction: surface statistics, n-gram overlap, embeddings."""

from __future__ import annotations

import numpy as np
import pytest

from crossread.corpus import build_document
from crossread.features import (
    EMBED_DIM,
    TRAD_FEATURE_NAMES,
    FeatureError,
    FeatureMatrix,
    assemble,
    crossngo_feature_names,
    crossngo_features,
    load_embeddings,
    load_matrix,
    save_matrix,
    schema_fingerprint,
    trad_features,
)
from crossread.ngram import NgramProfile, build_profile


def doc(text, doc_id="d1", language="tgl", grade=1):
    return build_document(doc_id, language, grade, text)


def make_profiles(*corpus_docs):
    profiles = {}
    for lang in ("tgl", "bcl", "ceb"):
        docs = [d for d in corpus_docs if d.language == lang]
        for n in (2, 3):
            profiles[(lang, n)] = build_profile(
                docs, n=n, top_fraction=1.0, language=lang
            )
    return profiles


class TestTradFeatures:
    def test_hand_worked_two_word_document(self):
        # "mata" -> ma|ta (cv cv), "tubig" -> tu|big (cv cvc)
        vector = trad_features(doc("Mata. Tubig."))
        expected = [
            2.0,   # words
            2.0,   # phrases
            2.0,   # sentences
            4.5,   # mean word length in characters
            1.0,   # mean sentence length in words
            2.0,   # mean syllables per word
            0.0,   # polysyllables
            0.0,   # cluster density
            0.0, 0.75, 0.0, 0.25, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        ]
        assert vector == pytest.approx(expected)
        assert len(TRAD_FEATURE_NAMES) == 18

    def test_polysyllable_needs_more_than_five(self):
        # 5 syllables is not polysyllabic, 6 is
        five = trad_features(doc("nakakatawa."))
        assert five[6] == 0.0
        six = trad_features(doc("nakakatawana."))
        assert six[6] == 1.0

    def test_phrase_and_sentence_counts(self):
        vector = trad_features(doc("Isa, dalawa. Tatlo; apat na!"))
        assert vector[1] == 4.0
        assert vector[2] == 2.0

    def test_vowelless_word_still_counts_as_word(self):
        vector = trad_features(doc("mata mgb."))
        assert vector[0] == 2.0
        # syllable average ignores the unsyllabifiable token
        assert vector[5] == 2.0

    def test_all_words_unsyllabifiable_raises(self):
        with pytest.raises(FeatureError) as err:
            trad_features(doc("mgb tk."))
        assert err.value.code == "unsyllabifiable-document"

    def test_duplicating_text_doubles_counts_keeps_averages(self):
        base = "Mata ng bata, maliit. May sastre sa bayan!"
        one = trad_features(doc(base))
        two = trad_features(doc(base + " " + base))
        for i in (0, 1, 2):
            assert two[i] == 2 * one[i]
        for i in (3, 4, 5, 7):
            assert two[i] == pytest.approx(one[i])
        assert two[8:] == pytest.approx(one[8:])
        assert two[6] == 2 * one[6]

    def test_digraph_toggle_changes_syllable_view(self):
        with_digraph = trad_features(doc("bang."))
        without = trad_features(doc("bang.", language="eng"), digraph=False)
        # one unit ng gives cvc; split into n + g it becomes cvcc
        assert with_digraph[11] == pytest.approx(1.0)   # density_cvc
        assert without[14] == pytest.approx(1.0)        # density_cvcc


class TestCrossngoFeatures:
    def test_two_of_five_grams_found(self):
        profiles = {
            ("tgl", 2): NgramProfile(
                language="tgl", n=2, top_fraction=0.25,
                entries=(("ma", 10), ("ta", 8), ("zz", 5)),
            ),
            ("tgl", 3): NgramProfile(
                language="tgl", n=3, top_fraction=0.25, entries=()
            ),
        }
        # unique bigrams of "mata mot": ma, at, ta, mo, ot -> 2 hits of 5
        values = crossngo_features(
            doc("mata mot"), profiles, reference_langs=("tgl",)
        )
        assert values[0] == pytest.approx(0.4)
        assert values[1] == 0.0

    def test_column_order_is_order_major(self):
        names = crossngo_feature_names(("tgl", "bcl", "ceb"))
        assert names == (
            "crossngo_2_tgl", "crossngo_2_bcl", "crossngo_2_ceb",
            "crossngo_3_tgl", "crossngo_3_bcl", "crossngo_3_ceb",
        )

    def test_empty_profile_gives_zero(self):
        profiles = {
            ("tgl", 2): NgramProfile(language="tgl", n=2, top_fraction=0.25, entries=()),
            ("tgl", 3): NgramProfile(language="tgl", n=3, top_fraction=0.25, entries=()),
        }
        values = crossngo_features(doc("mata"), profiles, reference_langs=("tgl",))
        assert values == pytest.approx([0.0, 0.0])

    def test_missing_profile_raises(self):
        with pytest.raises(FeatureError) as err:
            crossngo_features(doc("mata"), {}, reference_langs=("tgl",))
        assert err.value.code == "missing-profile"

    def test_values_in_unit_interval(self):
        docs = [
            doc("mata ng bata"),
            doc("balay sa dagat", doc_id="d2", language="bcl"),
            doc("usa ka adlaw", doc_id="d3", language="ceb"),
        ]
        profiles = make_profiles(*docs)
        for d in docs:
            values = crossngo_features(d, profiles)
            assert np.all(values >= 0.0) and np.all(values <= 1.0)


def write_embeddings(path, rows, dim=EMBED_DIM):
    header = "id," + ",".join(f"e{i}" for i in range(dim))
    lines = [header]
    for doc_id, value in rows:
        lines.append(doc_id + "," + ",".join(str(value) for _ in range(dim)))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


class TestLoadEmbeddings:
    def test_loads_and_indexes(self, tmp_path):
        path = tmp_path / "emb.csv"
        write_embeddings(path, [("d1", 0.5), ("d2", -1.0)])
        table = load_embeddings(path)
        assert "d1" in table and "d2" in table
        assert table.vectors["d1"].shape == (EMBED_DIM,)

    def test_wrong_dimension(self, tmp_path):
        path = tmp_path / "emb.csv"
        write_embeddings(path, [("d1", 0.5)], dim=10)
        with pytest.raises(FeatureError) as err:
            load_embeddings(path)
        assert err.value.code == "malformed-embeddings"

    def test_duplicate_id(self, tmp_path):
        path = tmp_path / "emb.csv"
        write_embeddings(path, [("d1", 0.5), ("d1", 0.2)])
        with pytest.raises(FeatureError) as err:
            load_embeddings(path)
        assert err.value.code == "duplicate-id"

    def test_non_numeric(self, tmp_path):
        path = tmp_path / "emb.csv"
        header = "id," + ",".join(f"e{i}" for i in range(EMBED_DIM))
        row = "d1," + ",".join(["0.1"] * (EMBED_DIM - 1) + ["oops"])
        path.write_text(header + "\n" + row + "\n", encoding="utf-8")
        with pytest.raises(FeatureError):
            load_embeddings(path)

    def test_non_finite(self, tmp_path):
        path = tmp_path / "emb.csv"
        header = "id," + ",".join(f"e{i}" for i in range(EMBED_DIM))
        row = "d1," + ",".join(["0.1"] * (EMBED_DIM - 1) + ["nan"])
        path.write_text(header + "\n" + row + "\n", encoding="utf-8")
        with pytest.raises(FeatureError):
            load_embeddings(path)

    def test_merges_multiple_files(self, tmp_path):
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_embeddings(p1, [("d1", 0.5)])
        write_embeddings(p2, [("d2", 0.25)])
        table = load_embeddings([p1, p2])
        assert "d1" in table and "d2" in table


class SmallWorld:
    """Three tiny one-language corpora plus matching embeddings."""

    def __init__(self, tmp_path):
        from crossread.corpus import Corpus

        self.docs = [
            doc("Mata ng bata.", doc_id="t1", language="tgl", grade=1),
            doc("Malaki ang dagat.", doc_id="t2", language="tgl", grade=2),
            doc("Harong asin balay.", doc_id="b1", language="bcl", grade=1),
            doc("Dakulang harong iyan.", doc_id="b2", language="bcl", grade=2),
            doc("Usa ka adlaw.", doc_id="c1", language="ceb", grade=1),
            doc("Dako nga balay.", doc_id="c2", language="ceb", grade=2),
        ]
        self.corpora = [
            Corpus(language=lang, documents=tuple(d for d in self.docs if d.language == lang))
            for lang in ("tgl", "bcl", "ceb")
        ]
        self.profiles = make_profiles(*self.docs)
        emb_path = tmp_path / "emb.csv"
        write_embeddings(emb_path, [(d.id, 0.1 * i) for i, d in enumerate(self.docs)])
        self.embeddings = load_embeddings(emb_path)


class TestAssemble:
    @pytest.mark.parametrize(
        "selector,width",
        [("TRAD", 18), ("TRAD_CROSSNGO", 24), ("EMB", 768), ("ALL", 792)],
    )
    def test_widths(self, tmp_path, selector, width):
        world = SmallWorld(tmp_path)
        matrix = assemble(
            world.corpora, selector,
            profiles=world.profiles, embeddings=world.embeddings,
        )
        assert matrix.values.shape == (6, width)
        assert len(matrix.feature_names) == width
        assert len(matrix.feature_groups) == width

    def test_rows_sorted_by_language_then_id(self, tmp_path):
        world = SmallWorld(tmp_path)
        matrix = assemble(world.corpora, "TRAD")
        assert matrix.doc_ids == ("b1", "b2", "c1", "c2", "t1", "t2")
        assert matrix.languages == ("bcl", "bcl", "ceb", "ceb", "tgl", "tgl")

    def test_group_labels(self, tmp_path):
        world = SmallWorld(tmp_path)
        matrix = assemble(
            world.corpora, "ALL",
            profiles=world.profiles, embeddings=world.embeddings,
        )
        assert matrix.feature_groups[:18] == tuple(["trad"] * 18)
        assert matrix.feature_groups[18:24] == tuple(["crossngo"] * 6)
        assert set(matrix.feature_groups[24:]) == {"emb"}

    def test_missing_profiles_rejected(self, tmp_path):
        world = SmallWorld(tmp_path)
        with pytest.raises(FeatureError) as err:
            assemble(world.corpora, "TRAD_CROSSNGO")
        assert err.value.code == "missing-profiles"

    def test_missing_embeddings_rejected(self, tmp_path):
        world = SmallWorld(tmp_path)
        with pytest.raises(FeatureError) as err:
            assemble(world.corpora, "EMB")
        assert err.value.code == "missing-embeddings"

    def test_missing_embedding_row_rejected(self, tmp_path):
        world = SmallWorld(tmp_path)
        emb_path = tmp_path / "partial.csv"
        write_embeddings(emb_path, [("t1", 0.5)])
        with pytest.raises(FeatureError) as err:
            assemble(world.corpora, "EMB", embeddings=load_embeddings(emb_path))
        assert err.value.code == "missing-embedding"

    def test_unknown_selector(self, tmp_path):
        world = SmallWorld(tmp_path)
        with pytest.raises(FeatureError) as err:
            assemble(world.corpora, "TRAD_PLUS")
        assert err.value.code == "unknown-feature-set"

    def test_document_subset(self, tmp_path):
        world = SmallWorld(tmp_path)
        subset = [d for d in world.docs if d.id in ("t1", "b1")]
        matrix = assemble(world.corpora, "TRAD", documents=subset)
        assert matrix.doc_ids == ("b1", "t1")


class TestMatrixIO:
    def test_round_trip(self, tmp_path):
        world = SmallWorld(tmp_path)
        matrix = assemble(world.corpora, "TRAD_CROSSNGO", profiles=world.profiles)
        path = tmp_path / "features.csv"
        save_matrix(matrix, path)
        loaded = load_matrix(path)
        assert loaded.feature_names == matrix.feature_names
        assert loaded.doc_ids == matrix.doc_ids
        assert loaded.labels.tolist() == matrix.labels.tolist()
        assert np.array_equal(loaded.values, matrix.values)
        assert loaded.fingerprint() == matrix.fingerprint()

    def test_fingerprint_tracks_schema(self):
        base = schema_fingerprint(("a", "b"), ("trad", "trad"))
        assert base == schema_fingerprint(("a", "b"), ("trad", "trad"))
        assert base != schema_fingerprint(("a", "c"), ("trad", "trad"))
        assert base != schema_fingerprint(("a", "b"), ("trad", "emb"))
