"""
Landmarking metafeatures: cross-validated accuracy of seven cheap learners.

Folds are stratified 5-fold (shuffled, seeded); when any class has fewer than
five rows the folds fall back to leave-one-out. Predictions are pooled across
folds before scoring.
"""

from typing import Callable, Dict, Tuple

import numpy as np
from sklearn.dummy import DummyClassifier
from sklearn.metrics import accuracy_score, balanced_accuracy_score
from sklearn.model_selection import LeaveOneOut, StratifiedKFold
from sklearn.neighbors import NearestCentroid
from sklearn.tree import DecisionTreeClassifier

from ..core.seeding import derive_seed
from ..learners import ClassifierKind, MajorityVoteNeighbors, predict, train

N_FOLDS = 5

LANDMARKERS = (
    "one_nn",
    "best_stump",
    "random_stump",
    "worst_stump",
    "naive_bayes",
    "nearest_centroid",
    "majority_class",
)

# fit(X_train, y_train) -> predict(X_test) -> labels
FoldLearner = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


def landmark_names():
    return [f"{name}_{score}" for name in LANDMARKERS for score in ("accuracy", "balanced_accuracy")]


def fold_indices(y: np.ndarray, seed: int):
    _, counts = np.unique(y, return_counts=True)
    if counts.min() < N_FOLDS:
        return list(LeaveOneOut().split(y.reshape(-1, 1)))
    folds = StratifiedKFold(n_splits=N_FOLDS, shuffle=True, random_state=seed)
    return list(folds.split(np.zeros((y.size, 1)), y))


def cross_validated(learner: FoldLearner, X: np.ndarray, y: np.ndarray, folds) -> Tuple[float, float]:
    """Pooled (accuracy, balanced accuracy) of a learner over the folds."""
    predictions = np.empty_like(y)
    for train_idx, test_idx in folds:
        y_train = y[train_idx]
        if np.unique(y_train).size < 2:
            predictions[test_idx] = y_train[0]
            continue
        predictions[test_idx] = learner(X[train_idx], y_train, X[test_idx])
    return float(accuracy_score(y, predictions)), float(balanced_accuracy_score(y, predictions))


def _estimator_learner(factory) -> FoldLearner:
    def run(X_train, y_train, X_test):
        return factory().fit(X_train, y_train).predict(X_test)
    return run


def _naive_bayes(seed: int) -> FoldLearner:
    def run(X_train, y_train, X_test):
        return predict(train(ClassifierKind.GNB, X_train, y_train, seed), X_test)
    return run


def _stump(seed: int, feature: int) -> FoldLearner:
    def run(X_train, y_train, X_test):
        stump = DecisionTreeClassifier(max_depth=1, random_state=seed)
        return stump.fit(X_train[:, [feature]], y_train).predict(X_test[:, [feature]])
    return run


def landmark(X: np.ndarray, y: np.ndarray, seed: int) -> Dict[str, float]:
    """All 14 landmarking values, keyed by metafeature name."""
    folds = fold_indices(y, derive_seed(seed, "landmark-folds"))
    stump_seed = derive_seed(seed, "stump")
    scores: Dict[str, Tuple[float, float]] = {}

    scores["one_nn"] = cross_validated(_estimator_learner(lambda: MajorityVoteNeighbors(n_neighbors=1)), X, y, folds)

    per_feature = [cross_validated(_stump(stump_seed, j), X, y, folds) for j in range(X.shape[1])]
    stump_accuracy = np.array([accuracy for accuracy, _ in per_feature])
    # argmax/argmin return the first occurrence, so ties go to the lower feature index
    scores["best_stump"] = per_feature[int(np.argmax(stump_accuracy))]
    random_feature = int(np.random.default_rng(derive_seed(seed, "random-stump")).integers(X.shape[1]))
    scores["random_stump"] = per_feature[random_feature]
    scores["worst_stump"] = per_feature[int(np.argmin(stump_accuracy))]

    scores["naive_bayes"] = cross_validated(_naive_bayes(derive_seed(seed, "naive-bayes")), X, y, folds)
    scores["nearest_centroid"] = cross_validated(_estimator_learner(NearestCentroid), X, y, folds)
    scores["majority_class"] = cross_validated(
        _estimator_learner(lambda: DummyClassifier(strategy="most_frequent")), X, y, folds
    )

    values = {}
    for name in LANDMARKERS:
        values[f"{name}_accuracy"], values[f"{name}_balanced_accuracy"] = scores[name]
    return values
