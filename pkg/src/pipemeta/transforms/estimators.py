"""
Transformers whose train-set contracts are stricter than the stock
scikit-learn estimators: exact [0, 1] min-max scaling, exact zeros for
constant columns, lower-index tie breaking in feature selection and
deterministic PCA component signs.
"""

import warnings

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.decomposition import PCA
from sklearn.feature_selection import f_classif
from sklearn.preprocessing import StandardScaler
from sklearn.utils.validation import check_is_fitted


class ZeroRangeMinMaxScaler(TransformerMixin, BaseEstimator):
    """(x - min) / (max - min) per column; zero-range columns map to 0. No clipping."""

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=np.float64)
        self.data_min_ = X.min(axis=0)
        self.data_range_ = X.max(axis=0) - self.data_min_
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "data_range_")
        X = np.asarray(X, dtype=np.float64)
        scaled = np.zeros_like(X)
        varying = self.data_range_ > 0
        scaled[:, varying] = (X[:, varying] - self.data_min_[varying]) / self.data_range_[varying]
        return scaled


class ConstantAwareStandardScaler(StandardScaler):
    """StandardScaler (population std) that emits exact zeros for constant training columns."""

    def fit(self, X, y=None, sample_weight=None):
        super().fit(X, y, sample_weight)
        X = np.asarray(X, dtype=np.float64)
        self.constant_features_ = np.ptp(X, axis=0) == 0
        return self

    def transform(self, X, copy=None):
        scaled = super().transform(X, copy=copy)
        scaled[:, self.constant_features_] = 0.0
        return scaled


def anova_scores(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """One-way ANOVA F-statistic per feature; undefined scores count as 0."""
    if np.unique(y).size < 2:
        return np.zeros(X.shape[1])
    with warnings.catch_warnings(), np.errstate(divide="ignore", invalid="ignore"):
        warnings.simplefilter("ignore")
        scores, _ = f_classif(X, y)
    return np.nan_to_num(np.asarray(scores, dtype=np.float64), nan=0.0, posinf=np.inf)


def top_feature_count(n_features: int, fraction: float = 0.1) -> int:
    """max(1, round(fraction * n)) with halves rounded up."""
    return max(1, int(np.floor(fraction * n_features + 0.5)))


class TopFractionSelector(TransformerMixin, BaseEstimator):
    """Keep the top-scoring fraction of features by ANOVA F-score.

    Equal scores prefer the lower feature index; the kept columns are emitted
    in their original order.
    """

    def __init__(self, fraction: float = 0.1):
        self.fraction = fraction

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        self.scores_ = anova_scores(X, np.asarray(y))
        k = top_feature_count(X.shape[1], self.fraction)
        order = np.lexsort((np.arange(X.shape[1]), -self.scores_))
        self.selected_ = np.sort(order[:k])
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "selected_")
        return np.asarray(X, dtype=np.float64)[:, self.selected_]


class SignedPCA(PCA):
    """PCA whose components are flipped so each one's largest-magnitude loading is positive."""

    def fit(self, X, y=None):
        super().fit(X, y)
        components = np.asarray(self.components_)
        lead = np.argmax(np.abs(components), axis=1)
        signs = np.sign(components[np.arange(components.shape[0]), lead])
        signs[signs == 0] = 1.0
        self.components_ = components * signs[:, np.newaxis]
        return self

    def fit_transform(self, X, y=None):
        return self.fit(X, y).transform(X)
