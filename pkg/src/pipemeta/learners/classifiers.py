#!/usr/bin/env python3
"""
The six classifiers with pinned hyperparameters and a uniform
train / predict / accuracy contract.
"""

import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Any, Tuple

import numpy as np
from sklearn.base import ClassifierMixin
from sklearn.dummy import DummyClassifier
from sklearn.ensemble import RandomForestClassifier
from sklearn.linear_model import LogisticRegression, Perceptron
from sklearn.metrics import accuracy_score
from sklearn.multiclass import OneVsRestClassifier
from sklearn.naive_bayes import GaussianNB
from sklearn.svm import SVC

from ..core.exceptions import DimensionMismatchError, LearnerError, PipemetaError, ResourceExhaustedError
from ..core.logging_utils import get_component_logger
from ..core.validation import ValidationError, validate_feature_matrix, validate_label_vector
from .neighbors import MajorityVoteNeighbors

logger = get_component_logger("learners")


class ClassifierKind(str, Enum):
    RFC = "RFC"
    LR = "LR"
    KNN = "KNN"
    PER = "Per"
    SVC = "SVC"
    GNB = "GNB"

    @classmethod
    def parse(cls, value: Any) -> "ClassifierKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value))
        except ValueError:
            raise ValueError(f"unknown classifier {value!r}; choose from {', '.join(k.value for k in cls)}")


@dataclass(frozen=True)
class TrainedModel:
    kind: ClassifierKind
    estimator: ClassifierMixin
    n_features: int
    classes: Tuple[Any, ...]


def make_estimator(kind: ClassifierKind, seed: int, n_features: int) -> ClassifierMixin:
    """Unfitted estimator for a classifier kind with its pinned hyperparameters."""
    kind = ClassifierKind.parse(kind)
    if kind is ClassifierKind.RFC:
        return RandomForestClassifier(
            n_estimators=10,
            criterion="gini",
            max_depth=None,
            bootstrap=True,
            max_features="sqrt",
            random_state=seed,
            n_jobs=1,
        )
    if kind is ClassifierKind.LR:
        return OneVsRestClassifier(LogisticRegression(C=1.0, tol=1e-4, max_iter=100, solver="lbfgs"))
    if kind is ClassifierKind.KNN:
        return MajorityVoteNeighbors(n_neighbors=5)
    if kind is ClassifierKind.PER:
        return Perceptron(eta0=1.0, max_iter=100, tol=None, shuffle=True, random_state=seed)
    if kind is ClassifierKind.SVC:
        # gamma="auto" is 1 / n_features
        return SVC(kernel="rbf", C=1.0, gamma="auto", tol=1e-3, decision_function_shape="ovo")
    return GaussianNB(var_smoothing=1e-9)


def _degenerate(kind: ClassifierKind, X: np.ndarray, classes: np.ndarray) -> bool:
    if classes.size < 2:
        return True
    # GaussianNB's variance floor scales with the largest feature variance, which is 0 here
    return kind is ClassifierKind.GNB and bool((np.ptp(X, axis=0) == 0).all())


def train(kind: ClassifierKind, X: np.ndarray, y: np.ndarray, seed: int) -> TrainedModel:
    """Train a classifier; deterministic for a fixed seed.

    A single-class target yields a model predicting that class everywhere.

    Raises:
        ResourceExhaustedError: training ran out of memory.
        LearnerError: any other training failure.
    """
    kind = ClassifierKind.parse(kind)
    X = validate_feature_matrix(X, "X", min_rows=1)
    y = validate_label_vector(y, X.shape[0], "y")
    classes = np.unique(y)

    if _degenerate(kind, X, classes):
        estimator = DummyClassifier(strategy="most_frequent")
    else:
        estimator = make_estimator(kind, seed, X.shape[1])

    try:
        with warnings.catch_warnings(), np.errstate(all="ignore"):
            warnings.simplefilter("ignore")
            estimator.fit(X, y)
    except MemoryError:
        raise ResourceExhaustedError(f"{kind.value} ran out of memory training on {X.shape[0]} x {X.shape[1]} data")
    except PipemetaError:
        raise
    except Exception as e:
        raise LearnerError(f"{kind.value} failed to train: {e}")

    logger.debug(f"Trained {kind.value} on {X.shape[0]} rows, {X.shape[1]} features, {classes.size} classes")
    return TrainedModel(kind=kind, estimator=estimator, n_features=X.shape[1], classes=tuple(classes.tolist()))


def predict(model: TrainedModel, X: np.ndarray) -> np.ndarray:
    """Predict class labels for each row of X."""
    X = validate_feature_matrix(X, "X", min_rows=0)
    if X.shape[1] != model.n_features:
        raise DimensionMismatchError(f"{model.kind.value} expects {model.n_features} features, got {X.shape[1]}")
    if X.shape[0] == 0:
        return np.asarray(model.classes)[:0]
    try:
        with warnings.catch_warnings(), np.errstate(all="ignore"):
            warnings.simplefilter("ignore")
            return np.asarray(model.estimator.predict(X))
    except MemoryError:
        raise ResourceExhaustedError(f"{model.kind.value} ran out of memory predicting {X.shape[0]} rows")


def accuracy(pred: np.ndarray, truth: np.ndarray) -> float:
    """Fraction of exact matches."""
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape[0] != truth.shape[0]:
        raise ValidationError(f"prediction has {pred.shape[0]} entries, truth has {truth.shape[0]}")
    if truth.shape[0] == 0:
        raise ValidationError("accuracy is undefined for empty vectors")
    return float(accuracy_score(truth, pred))
