#!/usr/bin/env python3
"""
The eight preprocessors plus the identity baseline.

Every kind follows the same contract: ``fit`` learns on the training rows only
and returns an immutable FittedTransform; ``transform`` maps any matrix of the
fitted width to the kind's pinned output width.
"""

import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional, Tuple

import numpy as np
from sklearn.base import TransformerMixin
from sklearn.cluster import FeatureAgglomeration
from sklearn.decomposition import FastICA
from sklearn.exceptions import ConvergenceWarning
from sklearn.kernel_approximation import RBFSampler
from sklearn.preprocessing import FunctionTransformer, PolynomialFeatures

from ..core.config import DEFAULT_MAX_MATRIX_BYTES
from ..core.exceptions import (
    ConvergenceError,
    DimensionMismatchError,
    PipemetaError,
    ResourceExhaustedError,
    TransformError,
)
from ..core.logging_utils import get_component_logger
from ..core.validation import validate_feature_matrix, validate_label_vector
from .estimators import (
    ConstantAwareStandardScaler,
    SignedPCA,
    TopFractionSelector,
    ZeroRangeMinMaxScaler,
    top_feature_count,
)

logger = get_component_logger("transforms")


class PreprocessorKind(str, Enum):
    NONE = "None"
    MMS = "MMS"
    SS = "SS"
    SP = "SP"
    PCA = "PCA"
    ICA = "ICA"
    FA = "FA"
    PF = "PF"
    RBFS = "RBFS"

    @classmethod
    def parse(cls, value: Any) -> "PreprocessorKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value))
        except ValueError:
            raise ValueError(f"unknown preprocessor {value!r}; choose from {', '.join(k.value for k in cls)}")


@dataclass(frozen=True)
class TransformSettings:
    """Tunable limits for the preprocessors."""

    ica_max_iter: int = 200
    ica_tol: float = 1e-4
    rbf_gamma: float = 1.0
    rbf_components: int = 100
    select_fraction: float = 0.1
    max_matrix_bytes: int = DEFAULT_MAX_MATRIX_BYTES


DEFAULT_SETTINGS = TransformSettings()


def expected_out_dim(kind: PreprocessorKind, n_features: int, n_rows: int,
                     settings: TransformSettings = DEFAULT_SETTINGS) -> int:
    """Output width for a kind fitted on an (n_rows x n_features) training matrix."""
    kind = PreprocessorKind.parse(kind)
    n, m = n_features, n_rows
    if kind in (PreprocessorKind.NONE, PreprocessorKind.MMS, PreprocessorKind.SS):
        return n
    if kind is PreprocessorKind.SP:
        return top_feature_count(n, settings.select_fraction)
    if kind in (PreprocessorKind.PCA, PreprocessorKind.ICA):
        return min(m, n)
    if kind is PreprocessorKind.FA:
        return min(2, n)
    if kind is PreprocessorKind.PF:
        return 1 + n + n * (n + 1) // 2
    return settings.rbf_components


@dataclass(frozen=True)
class FittedTransform:
    kind: PreprocessorKind
    estimator: TransformerMixin
    in_dim: int
    out_dim: int
    max_matrix_bytes: int = DEFAULT_MAX_MATRIX_BYTES


def _check_matrix_budget(kind: PreprocessorKind, n_rows: int, out_dim: int, max_bytes: int) -> None:
    needed = n_rows * out_dim * np.dtype(np.float64).itemsize
    if needed > max_bytes:
        raise ResourceExhaustedError(
            f"{kind.value} output of {n_rows} x {out_dim} needs {needed} bytes, limit is {max_bytes}"
        )


def _build_estimator(kind: PreprocessorKind, n_rows: int, n_features: int, seed: int,
                     settings: TransformSettings) -> TransformerMixin:
    if kind is PreprocessorKind.NONE:
        return FunctionTransformer(None, validate=False)
    if kind is PreprocessorKind.MMS:
        return ZeroRangeMinMaxScaler()
    if kind is PreprocessorKind.SS:
        return ConstantAwareStandardScaler()
    if kind is PreprocessorKind.SP:
        return TopFractionSelector(fraction=settings.select_fraction)
    if kind is PreprocessorKind.PCA:
        return SignedPCA(n_components=min(n_rows, n_features), svd_solver="full")
    if kind is PreprocessorKind.ICA:
        return FastICA(
            n_components=min(n_rows, n_features),
            algorithm="parallel",
            whiten="unit-variance",
            fun="logcosh",
            max_iter=settings.ica_max_iter,
            tol=settings.ica_tol,
            random_state=seed,
        )
    if kind is PreprocessorKind.FA:
        if n_features < 2:
            return FunctionTransformer(None, validate=False)
        return FeatureAgglomeration(n_clusters=2, linkage="ward", pooling_func=np.mean)
    if kind is PreprocessorKind.PF:
        return PolynomialFeatures(degree=2, include_bias=True)
    return RBFSampler(gamma=settings.rbf_gamma, n_components=settings.rbf_components, random_state=seed)


def fit(kind: PreprocessorKind, X_train: np.ndarray, y_train: np.ndarray, seed: int,
        settings: Optional[TransformSettings] = None) -> FittedTransform:
    """Fit a preprocessor on the training partition."""
    fitted, _ = fit_transform(kind, X_train, y_train, seed, settings)
    return fitted


def fit_transform(kind: PreprocessorKind, X_train: np.ndarray, y_train: np.ndarray, seed: int,
                  settings: Optional[TransformSettings] = None) -> Tuple[FittedTransform, np.ndarray]:
    """Fit a preprocessor and return it with the transformed training rows.

    The training rows are transformed exactly once.

    Raises:
        ConvergenceError: ICA hit its iteration cap.
        ResourceExhaustedError: the output would exceed the matrix budget or
            the fit ran out of memory.
        TransformError: any other fitting failure.
    """
    kind = PreprocessorKind.parse(kind)
    settings = settings or DEFAULT_SETTINGS
    X_train = validate_feature_matrix(X_train, "X_train", min_rows=1)
    y_train = validate_label_vector(y_train, X_train.shape[0], "y_train")
    m, n = X_train.shape
    out_dim = expected_out_dim(kind, n, m, settings)
    _check_matrix_budget(kind, m, out_dim, settings.max_matrix_bytes)

    estimator = _build_estimator(kind, m, n, seed, settings)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            with np.errstate(all="ignore"):
                estimator.fit(X_train, y_train)
                fitted_train = np.asarray(estimator.transform(X_train), dtype=np.float64)
    except MemoryError:
        raise ResourceExhaustedError(f"{kind.value} ran out of memory fitting {m} x {n} data")
    except PipemetaError:
        raise
    except Exception as e:
        raise TransformError(f"{kind.value} failed to fit: {e}")

    if any(issubclass(w.category, ConvergenceWarning) for w in caught):
        raise ConvergenceError(f"{kind.value} did not converge within {settings.ica_max_iter} iterations")
    if not np.isfinite(fitted_train).all():
        raise TransformError(f"{kind.value} produced non-finite values on the training rows")
    if fitted_train.shape[1] != out_dim:
        raise TransformError(f"{kind.value} produced width {fitted_train.shape[1]}, expected {out_dim}")

    logger.debug(f"Fitted {kind.value}: {n} -> {out_dim} features on {m} rows")
    fitted = FittedTransform(kind=kind, estimator=estimator, in_dim=n, out_dim=out_dim,
                             max_matrix_bytes=settings.max_matrix_bytes)
    return fitted, fitted_train


def transform(ft: FittedTransform, X: np.ndarray) -> np.ndarray:
    """Apply a fitted preprocessor to any matrix of the fitted width."""
    X = validate_feature_matrix(X, "X", min_rows=0)
    if X.shape[1] != ft.in_dim:
        raise DimensionMismatchError(f"{ft.kind.value} was fitted on {ft.in_dim} features, got {X.shape[1]}")
    if X.shape[0] == 0:
        return np.zeros((0, ft.out_dim))
    _check_matrix_budget(ft.kind, X.shape[0], ft.out_dim, ft.max_matrix_bytes)
    try:
        with warnings.catch_warnings(), np.errstate(all="ignore"):
            warnings.simplefilter("ignore")
            result = np.asarray(ft.estimator.transform(X), dtype=np.float64)
    except MemoryError:
        raise ResourceExhaustedError(f"{ft.kind.value} ran out of memory transforming {X.shape[0]} rows")
    if not np.isfinite(result).all():
        raise TransformError(f"{ft.kind.value} produced non-finite values")
    return result
