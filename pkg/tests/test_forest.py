"""Forest training: pinned randomness, determinism, evaluation."""

from __future__ import annotations

import numpy as np
import pytest

from crossread.features import FeatureMatrix
from crossread.forest import (
    EvaluationError,
    ForestConfig,
    ModelError,
    SplitMix64,
    cross_validate,
    evaluate_predictions,
    evaluate_split,
    load_model,
    num_candidate_features,
    predict,
    predict_proba,
    save_model,
    stratified_kfold,
    train,
)
from crossread.forest.ensemble import ForestModel
from crossread.forest.tree import Tree


class TestSplitMix64:
    def test_reference_vector_seed_zero(self):
        # first three outputs of the reference implementation for state 0
        rng = SplitMix64(0)
        assert [rng.next_u64() for _ in range(3)] == [
            0xE220A8397B1DCDAF,
            0x6E789E6AA1B965F4,
            0x06C45D188009454F,
        ]

    def test_same_seed_same_stream(self):
        a = SplitMix64(42)
        b = SplitMix64(42)
        assert [a.next_u64() for _ in range(10)] == [b.next_u64() for _ in range(10)]

    def test_random_unit_interval(self):
        rng = SplitMix64(7)
        values = [rng.random() for _ in range(1000)]
        assert all(0.0 <= v < 1.0 for v in values)

    def test_shuffle_is_permutation(self):
        rng = SplitMix64(3)
        items = list(range(20))
        rng.shuffle(items)
        assert sorted(items) == list(range(20))
        assert items != list(range(20))

    def test_sample_indices_distinct(self):
        rng = SplitMix64(5)
        picks = rng.sample_indices(24, 5)
        assert len(picks) == 5
        assert len(set(picks)) == 5
        assert all(0 <= p < 24 for p in picks)

    def test_bootstrap_in_range(self):
        rng = SplitMix64(5)
        picks = rng.bootstrap_indices(10, 10)
        assert len(picks) == 10
        assert all(0 <= p < 10 for p in picks)


class TestNumCandidateFeatures:
    @pytest.mark.parametrize(
        "p,expected", [(1, 1), (2, 2), (18, 5), (24, 5), (768, 10), (792, 10)]
    )
    def test_log2_rule(self, p, expected):
        assert num_candidate_features(p) == expected

    def test_natural_log_variant(self):
        assert num_candidate_features(24, natural_log=True) == 4

    def test_never_exceeds_predictors(self):
        assert num_candidate_features(2) <= 2


def make_matrix(n_per_class=30, n_features=5, seed=9, margin=True):
    """Three classes; feature 0 separates them cleanly when margin."""
    rng = np.random.default_rng(seed)
    rows, labels, ids = [], [], []
    for cls in (1, 2, 3):
        for i in range(n_per_class):
            row = rng.uniform(0.0, 1.0, size=n_features)
            if margin:
                row[0] = cls * 10.0 + rng.uniform(0.0, 1.0)
            rows.append(row)
            labels.append(cls)
            ids.append(f"doc-{cls}-{i:02d}")
    return FeatureMatrix(
        feature_names=tuple(f"f{i}" for i in range(n_features)),
        feature_groups=tuple(["trad"] * n_features),
        doc_ids=tuple(ids),
        languages=tuple(["tgl"] * len(ids)),
        labels=np.array(labels, dtype=np.int64),
        values=np.array(rows, dtype=np.float64),
    )


class TestStratifiedKfold:
    def test_balanced_two_class_example(self):
        labels = [1] * 5 + [2] * 5
        ids = [f"d{i}" for i in range(10)]
        folds = stratified_kfold(labels, ids, k=5, seed=1)
        for fold in range(5):
            members = [d for d in ids if folds[d] == fold]
            assert len(members) == 2
            got = sorted(labels[ids.index(d)] for d in members)
            assert got == [1, 2]

    def test_class_smaller_than_k_rejected(self):
        labels = [1] * 3 + [2] * 5
        ids = [f"d{i}" for i in range(8)]
        with pytest.raises(EvaluationError) as err:
            stratified_kfold(labels, ids, k=5)
        assert err.value.code == "class-too-small"

    def test_input_order_does_not_matter(self):
        labels = [1] * 6 + [2] * 6 + [3] * 6
        ids = [f"d{i:02d}" for i in range(18)]
        forward = stratified_kfold(labels, ids, k=3, seed=4)
        paired = list(zip(labels, ids))
        paired.reverse()
        backward = stratified_kfold([l for l, _ in paired], [i for _, i in paired], k=3, seed=4)
        assert forward == backward

    def test_seed_changes_assignment(self):
        labels = [1] * 10 + [2] * 10
        ids = [f"d{i:02d}" for i in range(20)]
        assert stratified_kfold(labels, ids, k=5, seed=1) != stratified_kfold(
            labels, ids, k=5, seed=2
        )


class TestTraining:
    def test_separable_data_cross_validates_perfectly(self):
        matrix = make_matrix()
        result = cross_validate(matrix, k=5, config=ForestConfig(num_trees=15))
        assert result.accuracy == 1.0

    def test_same_seed_identical_model_files(self, tmp_path):
        matrix = make_matrix()
        config = ForestConfig(num_trees=8, seed=1)
        path_a, path_b = tmp_path / "a.json", tmp_path / "b.json"
        save_model(train(matrix, config), path_a)
        save_model(train(matrix, config), path_b)
        assert path_a.read_bytes() == path_b.read_bytes()

    def test_different_seed_changes_trees(self, tmp_path):
        matrix = make_matrix(margin=False)
        a = train(matrix, ForestConfig(num_trees=5, seed=1))
        b = train(matrix, ForestConfig(num_trees=5, seed=99))
        assert any(
            ta.to_dict() != tb.to_dict() for ta, tb in zip(a.trees, b.trees)
        )

    def test_round_trip_preserves_predictions(self, tmp_path):
        matrix = make_matrix()
        model = train(matrix, ForestConfig(num_trees=10))
        path = tmp_path / "model.json"
        save_model(model, path)
        loaded = load_model(path)
        assert np.array_equal(predict(model, matrix), predict(loaded, matrix))
        assert loaded.fingerprint == model.fingerprint

    def test_schema_mismatch_rejected(self):
        matrix = make_matrix()
        model = train(matrix, ForestConfig(num_trees=3))
        other = FeatureMatrix(
            feature_names=("x0", "x1"),
            feature_groups=("trad", "trad"),
            doc_ids=("a",),
            languages=("tgl",),
            labels=np.array([1]),
            values=np.zeros((1, 2)),
        )
        with pytest.raises(ModelError) as err:
            predict(model, other)
        assert err.value.code == "schema-mismatch"

    def test_probabilities_sum_to_one(self):
        matrix = make_matrix(margin=False)
        model = train(matrix, ForestConfig(num_trees=10))
        proba = predict_proba(model, matrix)
        assert proba.shape == (len(matrix.doc_ids), 3)
        assert np.allclose(proba.sum(axis=1), 1.0, atol=1e-9)

    def test_gini_criterion_also_learns(self):
        matrix = make_matrix()
        config = ForestConfig(num_trees=10, criterion="gini")
        result = cross_validate(matrix, k=5, config=config)
        assert result.accuracy == 1.0

    def test_constant_features_are_harmless(self):
        matrix = make_matrix()
        values = matrix.values.copy()
        values[:, 1] = 7.5
        constant = FeatureMatrix(
            feature_names=matrix.feature_names,
            feature_groups=matrix.feature_groups,
            doc_ids=matrix.doc_ids,
            languages=matrix.languages,
            labels=matrix.labels,
            values=values,
        )
        result = cross_validate(constant, k=5, config=ForestConfig(num_trees=10))
        assert result.accuracy == 1.0

    def test_invalid_config_rejected(self):
        with pytest.raises(ModelError):
            train(make_matrix(), ForestConfig(num_trees=0))
        with pytest.raises(ModelError):
            train(make_matrix(), ForestConfig(bag_fraction=1.5))
        with pytest.raises(ModelError):
            train(make_matrix(), ForestConfig(criterion="chi2"))

    def test_tie_breaks_to_lowest_label(self):
        leaf_a = Tree(feature=[-1], threshold=[0.0], left=[-1], right=[-1],
                      distribution=[[0.6, 0.4]])
        leaf_b = Tree(feature=[-1], threshold=[0.0], left=[-1], right=[-1],
                      distribution=[[0.4, 0.6]])
        matrix = FeatureMatrix(
            feature_names=("f0",), feature_groups=("trad",),
            doc_ids=("a",), languages=("tgl",),
            labels=np.array([2]), values=np.array([[0.0]]),
        )
        model = ForestModel(
            config=ForestConfig(num_trees=2),
            class_labels=(2, 3),
            feature_names=("f0",),
            feature_groups=("trad",),
            fingerprint=matrix.fingerprint(),
            features_per_node=1,
            trees=[leaf_a, leaf_b],
        )
        assert predict(model, matrix).tolist() == [2]


class TestEvaluation:
    def test_accuracy_is_trace_over_total(self):
        gold = [1, 1, 2, 2, 3, 3]
        pred = [1, 2, 2, 2, 3, 1]
        result = evaluate_predictions(gold, pred, class_labels=(1, 2, 3))
        assert result.accuracy == pytest.approx(4 / 6)
        assert np.trace(result.confusion) == 4
        assert result.confusion.sum() == 6

    def test_confusion_rows_are_gold_counts(self):
        gold = [1, 1, 1, 2, 3, 3]
        pred = [1, 2, 3, 2, 3, 3]
        result = evaluate_predictions(gold, pred, class_labels=(1, 2, 3))
        assert result.confusion.sum(axis=1).tolist() == [3, 1, 2]

    def test_evaluate_split_on_heldout(self):
        matrix = make_matrix()
        model = train(matrix.select(range(0, 80)), ForestConfig(num_trees=10))
        result = evaluate_split(model, matrix.select(range(80, 90)))
        assert result.n_evaluated == 10
        assert result.accuracy == 1.0

    def test_row_permutation_keeps_cv_accuracy(self):
        matrix = make_matrix(n_per_class=10)
        rng = np.random.default_rng(0)
        perm = rng.permutation(len(matrix.doc_ids))
        shuffled = matrix.select(list(perm))
        config = ForestConfig(num_trees=8)
        a = cross_validate(matrix, k=5, config=config, fold_seed=1)
        b = cross_validate(shuffled, k=5, config=config, fold_seed=1)
        assert a.accuracy == b.accuracy
        assert a.fold_assignments == b.fold_assignments

    def test_extra_train_rows_join_every_fold(self):
        matrix = make_matrix(n_per_class=10)
        extra = make_matrix(n_per_class=5, seed=77)
        renamed = FeatureMatrix(
            feature_names=extra.feature_names,
            feature_groups=extra.feature_groups,
            doc_ids=tuple(f"x-{d}" for d in extra.doc_ids),
            languages=tuple(["bcl"] * len(extra.doc_ids)),
            labels=extra.labels,
            values=extra.values,
        )
        result = cross_validate(
            matrix, k=5, config=ForestConfig(num_trees=25), extra_train=renamed
        )
        # only the base matrix is ever evaluated
        assert result.n_evaluated == len(matrix.doc_ids)
        assert result.accuracy >= 0.9

    def test_leaky_extra_train_rejected(self):
        matrix = make_matrix(n_per_class=10)
        with pytest.raises(EvaluationError) as err:
            cross_validate(
                matrix, k=5, config=ForestConfig(num_trees=3), extra_train=matrix
            )
        assert err.value.code == "leaky-folds"
