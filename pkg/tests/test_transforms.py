"""Preprocessor fit/transform contracts and output-dimension rules."""

import numpy as np
import pytest
from sklearn.feature_selection import f_classif

from src.pipemeta.core.exceptions import ConvergenceError, DimensionMismatchError, ResourceExhaustedError
from src.pipemeta.core.validation import ValidationError
from src.pipemeta.transforms import PreprocessorKind, TransformSettings, expected_out_dim, fit, transform
from src.pipemeta.transforms.estimators import TopFractionSelector, top_feature_count

K = PreprocessorKind


def labels_for(m, rng):
    y = rng.integers(0, 2, size=m)
    y[:2] = [0, 1]
    return y


class TestKinds:
    def test_nine_members(self):
        assert [k.value for k in PreprocessorKind] == ["None", "MMS", "SS", "SP", "PCA", "ICA", "FA", "PF", "RBFS"]

    def test_parse(self):
        assert PreprocessorKind.parse("RBFS") is K.RBFS
        with pytest.raises(ValueError, match="unknown preprocessor"):
            PreprocessorKind.parse("LDA")


class TestOutputDimensions:
    def test_fifty_by_ten(self, rng):
        # independent uniform sources, mixed, so ICA has structure to find
        X = rng.uniform(-1.0, 1.0, size=(50, 10)) @ rng.normal(size=(10, 10))
        y = labels_for(50, rng)
        expected = {K.MMS: 10, K.SS: 10, K.SP: 1, K.PCA: 10, K.ICA: 10, K.FA: 2, K.PF: 66, K.RBFS: 100}
        for kind, out_dim in expected.items():
            fitted = fit(kind, X, y, seed=1)
            assert fitted.out_dim == out_dim, kind
            assert transform(fitted, X).shape == (50, out_dim), kind

    @pytest.mark.parametrize("n,expected", [(20, 2), (10, 1), (15, 2), (25, 3), (4, 1), (1, 1)])
    def test_selection_count(self, n, expected):
        assert expected_out_dim(K.SP, n, 30) == expected
        assert top_feature_count(n) == expected

    def test_polynomial_count(self):
        assert expected_out_dim(K.PF, 2, 10) == 6

    def test_projection_caps_at_rows(self):
        assert expected_out_dim(K.PCA, 20, 5) == 5
        assert expected_out_dim(K.ICA, 3, 40) == 3
        assert expected_out_dim(K.FA, 1, 40) == 1

    @pytest.mark.parametrize("seed", range(6))
    def test_rule_holds_on_random_shapes(self, seed):
        rng = np.random.default_rng(seed)
        m, n = int(rng.integers(5, 61)), int(rng.integers(1, 21))
        X = rng.normal(size=(m, n))
        y = labels_for(m, rng)
        for kind in PreprocessorKind:
            if kind is K.ICA:
                continue
            fitted = fit(kind, X, y, seed=seed)
            assert transform(fitted, X).shape == (m, expected_out_dim(kind, n, m)), kind


class TestScalers:
    def test_standard_scaler_hand_values(self):
        X = np.array([[2.0], [4.0], [6.0]])
        out = transform(fit(K.SS, X, [0, 1, 0], seed=0), X)
        np.testing.assert_allclose(out[:, 0], [-1.224744871391589, 0.0, 1.224744871391589], atol=1e-12)

    def test_min_max_endpoints_and_no_clipping(self):
        fitted = fit(K.MMS, np.array([[10.0], [20.0]]), [0, 1], seed=0)
        np.testing.assert_array_equal(transform(fitted, np.array([[10.0], [20.0]]))[:, 0], [0.0, 1.0])
        np.testing.assert_allclose(transform(fitted, np.array([[30.0], [5.0]]))[:, 0], [2.0, -0.5])

    @pytest.mark.parametrize("seed", range(50))
    def test_train_contracts_on_random_matrices(self, seed):
        rng = np.random.default_rng(1000 + seed)
        m, n = int(rng.integers(5, 40)), int(rng.integers(1, 8))
        X = rng.normal(size=(m, n)) * rng.uniform(0.1, 100, size=n) + rng.uniform(-50, 50, size=n)
        X[:, 0] = 3.5 if seed % 5 == 0 else X[:, 0]
        y = labels_for(m, rng)

        scaled = transform(fit(K.MMS, X, y, seed), X)
        assert scaled.min() >= 0.0 and scaled.max() <= 1.0

        standard = transform(fit(K.SS, X, y, seed), X)
        varying = np.ptp(X, axis=0) > 0
        assert np.all(np.abs(standard[:, varying].mean(axis=0)) <= 1e-9)
        assert np.all(np.abs(standard[:, varying].var(axis=0) - 1.0) <= 1e-6)
        assert np.all(scaled[:, ~varying] == 0.0) and np.all(standard[:, ~varying] == 0.0)


class TestSelection:
    def test_matches_brute_force_scores(self, rng):
        X = rng.normal(size=(60, 12))
        y = labels_for(60, rng)
        X[:, 7] += 3.0 * y
        fitted = fit(K.SP, X, y, seed=0)
        scores = f_classif(X, y)[0]
        assert fitted.estimator.selected_.tolist() == [int(np.argmax(scores))] == [7]
        np.testing.assert_array_equal(transform(fitted, X)[:, 0], X[:, 7])

    def test_ties_prefer_lower_index(self):
        X = np.tile(np.array([[0.0], [1.0], [0.0], [1.0]]), (1, 20))
        selector = TopFractionSelector(0.1).fit(X, np.array([0, 1, 0, 1]))
        assert selector.selected_.tolist() == [0, 1]

    def test_constant_features_score_zero(self):
        X = np.column_stack([np.ones(6), [0, 1, 0, 1, 0, 1]])
        selector = TopFractionSelector(0.1).fit(X, np.array([0, 1, 0, 1, 0, 1]))
        assert selector.scores_[0] == 0.0
        assert selector.selected_.tolist() == [1]


class TestProjections:
    def test_pca_orthogonal_and_variance_preserving(self, rng):
        X = rng.normal(size=(40, 5)) @ rng.normal(size=(5, 5))
        Z = transform(fit(K.PCA, X, labels_for(40, rng), seed=0), X)
        gram = Z.T @ Z
        off_diagonal = gram - np.diag(np.diag(gram))
        assert np.abs(off_diagonal).max() <= 1e-6 * np.abs(gram).max()
        np.testing.assert_allclose(Z.var(axis=0).sum(), X.var(axis=0).sum(), rtol=1e-6)

    def test_pca_sign_convention(self, rng):
        X = rng.normal(size=(30, 4))
        components = fit(K.PCA, X, labels_for(30, rng), seed=0).estimator.components_
        lead = components[np.arange(4), np.argmax(np.abs(components), axis=1)]
        assert np.all(lead > 0)

    def test_ica_iteration_cap_is_a_convergence_error(self, rng):
        X = rng.normal(size=(80, 6))
        with pytest.raises(ConvergenceError, match="did not converge"):
            fit(K.ICA, X, labels_for(80, rng), seed=0, settings=TransformSettings(ica_max_iter=1))

    def test_feature_agglomeration_means_clusters(self):
        base = np.arange(8, dtype=float)
        X = np.column_stack([base, base + 0.01, -base * 50, -base * 50 + 0.02])
        Z = transform(fit(K.FA, X, [0, 1] * 4, seed=0), X)
        assert Z.shape == (8, 2)
        pooled = sorted([tuple(np.round(col, 6)) for col in Z.T])
        expected = sorted([tuple(np.round(base + 0.005, 6)), tuple(np.round(-base * 50 + 0.01, 6))])
        assert pooled == expected


class TestExpansions:
    def test_polynomial_has_bias_and_inputs(self, rng):
        X = rng.normal(size=(10, 3))
        Z = transform(fit(K.PF, X, labels_for(10, rng), seed=0), X)
        assert Z.shape[1] == 10
        np.testing.assert_array_equal(Z[:, 0], np.ones(10))
        np.testing.assert_array_equal(Z[:, 1:4], X)

    def test_rbf_weights_are_seeded(self, rng):
        X = rng.normal(size=(20, 4))
        y = labels_for(20, rng)
        first, second = fit(K.RBFS, X, y, seed=5), fit(K.RBFS, X, y, seed=5)
        np.testing.assert_array_equal(first.estimator.random_weights_, second.estimator.random_weights_)
        assert not np.array_equal(first.estimator.random_weights_, fit(K.RBFS, X, y, seed=6).estimator.random_weights_)
        assert np.abs(transform(first, X)).max() <= np.sqrt(2.0 / 100) + 1e-12

    def test_matrix_budget(self, rng):
        X = rng.normal(size=(10, 30))
        with pytest.raises(ResourceExhaustedError, match="limit is 1000"):
            fit(K.PF, X, labels_for(10, rng), seed=0, settings=TransformSettings(max_matrix_bytes=1000))


class TestTransformContract:
    def test_identity_baseline(self, rng):
        X = rng.normal(size=(7, 3))
        np.testing.assert_array_equal(transform(fit(K.NONE, X, labels_for(7, rng), 0), X), X)

    def test_width_mismatch(self, rng):
        fitted = fit(K.SS, rng.normal(size=(8, 3)), labels_for(8, rng), seed=0)
        with pytest.raises(DimensionMismatchError, match="fitted on 3 features, got 4"):
            transform(fitted, rng.normal(size=(2, 4)))

    def test_zero_rows(self, rng):
        fitted = fit(K.PF, rng.normal(size=(8, 3)), labels_for(8, rng), seed=0)
        assert transform(fitted, np.zeros((0, 3))).shape == (0, 10)

    @pytest.mark.parametrize("kind", [k for k in PreprocessorKind if k is not K.ICA])
    def test_row_wise(self, kind, rng):
        X = rng.normal(size=(25, 6))
        fitted = fit(kind, X, labels_for(25, rng), seed=3)
        stacked = np.vstack([transform(fitted, X[i:i + 1]) for i in range(5)])
        np.testing.assert_allclose(stacked, transform(fitted, X[:5]), rtol=1e-10, atol=1e-12)

    def test_fit_rejects_non_finite(self):
        with pytest.raises(ValidationError, match="non-finite"):
            fit(K.SS, np.array([[1.0], [np.inf]]), [0, 1], seed=0)
