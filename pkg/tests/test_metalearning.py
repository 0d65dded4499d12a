"""Metadataset construction and the random-forest metamodels."""

import numpy as np
import pytest

from src.pipemeta.core.validation import ValidationError
from src.pipemeta.learners import ClassifierKind
from src.pipemeta.metafeatures import MetafeatureVector
from src.pipemeta.metalearning import (
    POOLED,
    MetaInstance,
    build_metadataset,
    evaluate_by_dataset_split,
    evaluate_metamodel,
    feature_matrix,
    feature_names,
    model_for,
    read_metadataset,
    split_datasets,
    train_metamodel,
    train_metamodels,
    write_metadataset,
)
from src.pipemeta.runner.analytics import PREPROCESSORS
from src.pipemeta.transforms import PreprocessorKind

K, C = PreprocessorKind, ClassifierKind


def vector(dataset_id, value=1.0):
    return MetafeatureVector(dataset_id=dataset_id, values=np.full(41, value))


def planted_instances(rng, n, threshold=0.3):
    """Label 1 exactly when the preprocessor is SS and metafeature 3 exceeds the threshold."""
    instances = []
    others = [kind for kind in PREPROCESSORS if kind is not K.SS]
    for i in range(n):
        preproc = K.SS if rng.random() < 0.7 else others[int(rng.integers(len(others)))]
        metafeatures = np.ones(41)
        metafeatures[3] = rng.uniform()
        label = int(preproc is K.SS and metafeatures[3] > threshold)
        instances.append(MetaInstance(dataset_id=f"d{i}", clf=C.LR, preproc=preproc,
                                      metafeatures=metafeatures, label=label))
    return instances


class TestFeatures:
    def test_widths(self):
        assert len(feature_names()) == 49
        assert len(feature_names(pooled=True)) == 55
        assert feature_names()[41:] == [f"preproc_{kind.value}" for kind in PREPROCESSORS]

    def test_indicator_layout(self):
        instance = MetaInstance(dataset_id="d", clf=C.SVC, preproc=K.PCA, metafeatures=np.zeros(41), label=1)
        row = instance.features(pooled=True)
        assert row[41 + PREPROCESSORS.index(K.PCA)] == 1.0
        assert row[49 + list(ClassifierKind).index(C.SVC)] == 1.0
        assert row.sum() == 2.0
        assert feature_matrix([], pooled=True).shape == (0, 55)

    def test_baseline_is_not_an_option(self):
        with pytest.raises(ValidationError, match="baseline"):
            MetaInstance(dataset_id="d", clf=C.LR, preproc=K.NONE, metafeatures=np.zeros(41), label=0)


class TestBuildMetadataset:
    def store(self, make_store):
        return make_store({
            ("a", "None", "LR"): (1, 1, 0.8, 0.8),
            ("a", "SS", "LR"): (1, 1, 0.8, 0.8),
            ("a", "PCA", "LR"): (1, 1, 0.7, 0.7),
            ("a", "RBFS", "LR"): (1, 1, 0.9, 0.9),
            ("a", "FA", "LR"): None,
            ("a", "None", "GNB"): None,
            ("a", "SS", "GNB"): (1, 1, 0.9, 0.9),
        })

    def test_labels(self, make_store):
        instances = build_metadataset(self.store(make_store), {"a": vector("a")})
        labels = {instance.preproc: instance.label for instance in instances}
        assert labels == {K.SS: 1, K.PCA: 0, K.RBFS: 1}
        assert all(instance.clf is C.LR for instance in instances)

    def test_strict_comparator(self, make_store):
        instances = build_metadataset(self.store(make_store), {"a": vector("a")}, comparator=">")
        assert {instance.preproc: instance.label for instance in instances}[K.SS] == 0

    def test_datasets_without_metafeatures_are_skipped(self, make_store):
        assert build_metadataset(self.store(make_store), {}) == []

    def test_one_instance_per_ok_pair(self, full_store):
        store = full_store(["a", "b"], lambda d, p, c: 0.5 if c is C.LR else None)
        instances = build_metadataset(store, {"a": vector("a"), "b": vector("b", 2.0)})
        assert len(instances) == 16
        assert all(instance.label == 1 for instance in instances)


class TestPersistence:
    def test_write_then_read_by_classifier(self, tmp_path):
        instances = [
            MetaInstance(dataset_id="a", clf=C.LR, preproc=K.SS, metafeatures=np.linspace(0, 1, 41), label=1),
            MetaInstance(dataset_id="a", clf=C.KNN, preproc=K.RBFS, metafeatures=np.linspace(0, 1, 41), label=0),
        ]
        path = tmp_path / "meta.csv"
        write_metadataset(instances, path)
        loaded = read_metadataset(path)
        assert [(i.clf, i.preproc, i.label) for i in loaded] == [(C.LR, K.SS, 1), (C.KNN, K.RBFS, 0)]
        np.testing.assert_array_equal(loaded[0].metafeatures, instances[0].metafeatures)
        assert [i.clf for i in read_metadataset(path, clf=C.KNN)] == [C.KNN]

    def test_indicator_must_be_one_hot(self, tmp_path):
        instance = MetaInstance(dataset_id="a", clf=C.LR, preproc=K.SS, metafeatures=np.zeros(41), label=1)
        path = tmp_path / "meta.csv"
        write_metadataset([instance], path)
        text = path.read_text().splitlines()
        header, row = text[0].split(","), text[1].split(",")
        row[header.index("preproc_PCA")] = "1"
        path.write_text("\n".join([text[0], ",".join(row)]) + "\n")
        with pytest.raises(ValidationError, match="exactly one preprocessor"):
            read_metadataset(path)

    def test_unknown_columns(self, tmp_path):
        path = tmp_path / "meta.csv"
        path.write_text("dataset_id,clf,label\na,LR,1\n")
        with pytest.raises(ValidationError, match="unexpected columns"):
            read_metadataset(path)


class TestMetamodel:
    @pytest.mark.parametrize("seed", range(5))
    def test_learns_a_planted_rule(self, seed):
        instances = planted_instances(np.random.default_rng(seed), 500)
        model = train_metamodel(instances[:350], seed=seed)
        result = evaluate_metamodel(model, instances[350:])
        assert result.n == 150
        assert result.accuracy >= 0.9
        assert result.mode_baseline_accuracy <= 0.65

    def test_single_label_gives_a_constant_model(self):
        instances = [MetaInstance(dataset_id=f"d{i}", clf=C.LR, preproc=K.SS, metafeatures=np.full(41, i), label=0)
                     for i in range(4)]
        model = train_metamodel(instances, seed=0)
        assert model.degenerate
        assert model.predict(feature_matrix(instances)).tolist() == [0, 0, 0, 0]
        assert model.score(np.zeros((0, 49))).shape == (0,)

    def test_scores_are_vote_fractions(self):
        instances = planted_instances(np.random.default_rng(1), 200)
        model = train_metamodel(instances, seed=1)
        scores = model.score(feature_matrix(instances))
        np.testing.assert_allclose(scores * 10, np.round(scores * 10), atol=1e-9)
        np.testing.assert_array_equal(model.predict(feature_matrix(instances)), (scores >= 0.5).astype(int))

    def test_deterministic(self):
        instances = planted_instances(np.random.default_rng(2), 120)
        queries = feature_matrix(planted_instances(np.random.default_rng(3), 50))
        first, second = train_metamodel(instances, seed=4), train_metamodel(instances, seed=4)
        np.testing.assert_array_equal(first.score(queries), second.score(queries))

    def test_needs_instances(self):
        with pytest.raises(ValidationError):
            train_metamodel([], seed=0)

    def test_per_classifier_and_pooled(self):
        rng = np.random.default_rng(5)
        instances = [MetaInstance(dataset_id=f"d{i}", clf=C.LR if i % 2 else C.GNB, preproc=K.SS,
                                  metafeatures=rng.normal(size=41), label=i % 3 % 2) for i in range(30)]
        per_classifier = train_metamodels(instances, seed=0)
        assert sorted(per_classifier) == ["GNB", "LR"]
        assert model_for(per_classifier, C.LR).clf is C.LR
        assert model_for(per_classifier, C.SVC) is None

        pooled = train_metamodels(instances, seed=0, pooled=True)
        assert list(pooled) == [POOLED]
        assert model_for(pooled, C.SVC) is pooled[POOLED]
        assert pooled[POOLED].forest.n_features_in_ == 55


class TestDatasetSplit:
    def test_partition(self):
        ids = [f"d{i}" for i in range(10)]
        train, test = split_datasets(ids, seed=3)
        assert len(train) == 7 and len(test) == 3
        assert sorted(train + test) == ids
        assert split_datasets(ids, seed=3) == (train, test)

    def test_two_datasets_keep_one_each(self):
        train, test = split_datasets(["a", "b"], seed=0, ratio=0.9)
        assert len(train) == len(test) == 1

    def test_single_dataset(self):
        with pytest.raises(ValidationError, match="at least 2 datasets"):
            split_datasets(["a"], seed=0)

    def test_evaluation_table(self):
        rng = np.random.default_rng(7)
        instances = []
        for d in range(10):
            metafeatures = np.full(41, float(d))
            for clf in (C.LR, C.KNN):
                for preproc in PREPROCESSORS:
                    instances.append(MetaInstance(dataset_id=f"d{d}", clf=clf, preproc=preproc,
                                                  metafeatures=metafeatures, label=int(rng.random() < 0.5)))
        table = evaluate_by_dataset_split(instances, seed=1)
        assert list(table.index) == ["LR", "KNN", "overall"]
        assert table.loc["overall", "n_test"] == table.loc["LR", "n_test"] + table.loc["KNN", "n_test"] == 48
        assert table.loc["overall", "n_train"] == 112
        assert ((table["accuracy"] >= 0) & (table["accuracy"] <= 1)).all()
