"""Metafeature extraction over training partitions."""

import numpy as np
import pandas as pd
import pytest

from src.pipemeta.core import RunConfig
from src.pipemeta.core.exceptions import SingleClassError
from src.pipemeta.core.validation import ValidationError
from src.pipemeta.data import CleanDataset, impute, load_csv, one_hot_encode, synthesize, write_dataset
from src.pipemeta.metafeatures import (
    METAFEATURE_NAMES,
    MetafeatureVector,
    extract,
    extract_corpus,
    read_metafeatures,
    write_metafeatures,
)
from src.pipemeta.metafeatures.landmarkers import landmark_names


def cleaned(raw):
    clean, _ = one_hot_encode(impute(raw, seed=0))
    return clean


def csv_text(header, rows):
    return "\n".join([header] + [",".join(str(v) for v in row) for row in rows]) + "\n"


class TestVector:
    def test_forty_one_named_values(self):
        assert len(METAFEATURE_NAMES) == 41
        assert len(set(METAFEATURE_NAMES)) == 41
        assert len(landmark_names()) == 14

    def test_rejects_wrong_length(self):
        with pytest.raises(ValidationError, match="expected 41"):
            MetafeatureVector(dataset_id="d", values=np.zeros(40))

    def test_rejects_non_finite(self):
        values = np.zeros(41)
        values[METAFEATURE_NAMES.index("sparsity")] = np.nan
        with pytest.raises(ValidationError, match="sparsity"):
            MetafeatureVector(dataset_id="d", values=values)

    def test_values_are_read_only(self):
        vector = MetafeatureVector(dataset_id="d", values=np.ones(41))
        with pytest.raises(ValueError):
            vector.values[0] = 2.0


class TestExtract:
    def test_finite_and_deterministic(self):
        raw = synthesize("mixed", "m", n_rows=80, n_features=6, seed=3, missing_rate=0.05, n_classes=3)
        first = extract(raw, cleaned(raw), seed=9)
        second = extract(raw, cleaned(raw), seed=9)
        assert first.values.shape == (41,)
        assert np.isfinite(first.values).all()
        np.testing.assert_array_equal(first.values, second.values)

    def test_balanced_classes_have_unit_entropy(self):
        raw = synthesize("blobs", "b", n_rows=40, n_features=3, seed=1)
        vector = extract(raw, cleaned(raw), seed=0)
        assert abs(vector["normalized_class_entropy"] - 1.0) <= 1e-12
        assert vector["majority_class_fraction"] == vector["minority_class_fraction"] == 0.5

    def test_complete_data_has_no_missing_fractions(self):
        raw = synthesize("xor", "x", n_rows=50, n_features=4, seed=2)
        vector = extract(raw, cleaned(raw), seed=0)
        for name in ("pct_missing_values", "pct_instances_with_missing", "pct_features_with_missing"):
            assert vector[name] == 0.0

    def test_missing_fractions(self, write_csv):
        rows = [[i if i not in (1, 2) else "?", i * 3, "xy"[i % 2]] for i in range(10)]
        raw = load_csv(write_csv("gappy", csv_text("a,b,class", rows)))
        vector = extract(raw, cleaned(raw), seed=0)
        assert vector["pct_missing_values"] == pytest.approx(0.1)
        assert vector["pct_instances_with_missing"] == pytest.approx(0.2)
        assert vector["pct_features_with_missing"] == pytest.approx(0.5)

    def test_simple_shape_features(self, write_csv):
        rows = [[i, 2 * i, -i, "xy"[i % 2]] for i in range(10)]
        raw = load_csv(write_csv("linear", csv_text("a,b,c,class", rows)))
        vector = extract(raw, cleaned(raw), seed=0)
        assert (vector["n_instances"], vector["n_features"], vector["n_classes"]) == (10, 3, 2)
        assert vector["dimensionality"] == pytest.approx(0.3)
        assert vector["mean_abs_correlation"] == pytest.approx(1.0)
        assert vector["sparsity"] == pytest.approx(0.1)
        assert vector["pca_first_component_variance"] == pytest.approx(1.0)

    def test_column_kinds_come_from_the_raw_data(self):
        raw = synthesize("mixed", "m", n_rows=60, n_features=6, seed=4)
        vector = extract(raw, cleaned(raw), seed=0)
        assert (vector["n_numeric_features"], vector["n_categorical_features"]) == (3, 3)
        assert vector["ratio_categorical_numeric"] == 1.0
        assert vector["n_features"] > 6

    def test_majority_landmarker(self, write_csv):
        rng = np.random.default_rng(0)
        rows = [[round(float(v), 6), "a" if i < 70 else "b"] for i, v in enumerate(rng.normal(size=100))]
        raw = load_csv(write_csv("skewed", csv_text("x,class", rows)))
        vector = extract(raw, cleaned(raw), seed=0)
        assert vector["majority_class_accuracy"] == pytest.approx(0.7)
        assert vector["majority_class_balanced_accuracy"] == pytest.approx(0.5)
        assert vector["majority_class_fraction"] == pytest.approx(0.7)

    def test_landmarkers_are_accuracies(self):
        raw = synthesize("xor", "x", n_rows=60, n_features=5, seed=8)
        vector = extract(raw, cleaned(raw), seed=1)
        for name in landmark_names():
            assert 0.0 <= vector[name] <= 1.0, name
        assert vector["best_stump_accuracy"] >= vector["random_stump_accuracy"] >= vector["worst_stump_accuracy"]

    def test_duplicating_rows_keeps_class_balance(self):
        raw = synthesize("blobs", "b", n_rows=45, n_features=3, seed=5, n_classes=3)
        clean = cleaned(raw)
        doubled = CleanDataset(id=clean.id, X=np.vstack([clean.X, clean.X]), y=np.concatenate([clean.y, clean.y]),
                               feature_names=clean.feature_names)
        rows = np.concatenate([np.arange(raw.n_rows), np.arange(raw.n_rows)])
        once, twice = extract(raw, clean, seed=0), extract(raw, doubled, seed=0, raw_rows=rows)
        for name in ("majority_class_fraction", "minority_class_fraction", "normalized_class_entropy",
                     "pct_missing_values"):
            assert twice[name] == pytest.approx(once[name], abs=1e-12), name
        assert twice["n_instances"] == 2 * once["n_instances"]

    def test_single_class_partition(self):
        raw = synthesize("blobs", "b", n_rows=30, n_features=3, seed=0)
        clean = cleaned(raw)
        with pytest.raises(SingleClassError):
            extract(raw, clean.subset(np.flatnonzero(clean.y == 0)), seed=0)


class TestPersistence:
    def test_write_then_read(self, tmp_path):
        vectors = {
            "b": MetafeatureVector(dataset_id="b", values=np.linspace(0.1, 4.1, 41)),
            "a": MetafeatureVector(dataset_id="a", values=np.full(41, 1 / 3)),
        }
        path = tmp_path / "mf.csv"
        write_metafeatures(vectors, path)
        loaded = read_metafeatures(path)
        assert list(loaded) == ["a", "b"]
        np.testing.assert_array_equal(loaded["a"].values, vectors["a"].values)
        np.testing.assert_array_equal(loaded["b"].values, vectors["b"].values)

    def test_duplicate_dataset(self, tmp_path):
        path = tmp_path / "mf.csv"
        frame = pd.DataFrame([["a", *[0.0] * 41], ["a", *[1.0] * 41]], columns=["dataset_id", *METAFEATURE_NAMES])
        frame.to_csv(path, index=False)
        with pytest.raises(ValidationError, match="duplicate dataset_id 'a'"):
            read_metafeatures(path)

    def test_unexpected_columns(self, tmp_path):
        path = tmp_path / "mf.csv"
        path.write_text("dataset_id,n_instances\na,3\n", encoding="utf-8")
        with pytest.raises(ValidationError, match="unexpected columns"):
            read_metafeatures(path)


@pytest.mark.integration
def test_extract_corpus_skips_unusable_datasets(tmp_path):
    data_dir = tmp_path / "data"
    write_dataset(synthesize("blobs", "alpha", n_rows=40, n_features=3, seed=1), data_dir)
    write_dataset(synthesize("mixed", "beta", n_rows=50, n_features=4, seed=2, missing_rate=0.1), data_dir)
    (data_dir / "gamma.csv").write_text("x,class\n1,a\n2,a\n3,a\n", encoding="utf-8")

    config = RunConfig(data_dir=data_dir, seed=3)
    vectors = extract_corpus(config)
    assert sorted(vectors) == ["alpha", "beta"]
    assert vectors["alpha"]["n_instances"] == 28
    np.testing.assert_array_equal(extract_corpus(config)["beta"].values, vectors["beta"].values)
