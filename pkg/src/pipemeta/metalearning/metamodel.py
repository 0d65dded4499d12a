#!/usr/bin/env python3
"""
Random-forest metamodels predicting whether a preprocessor will match or
beat the baseline.

The score of an instance is the fraction of trees voting for label 1; a score
of at least 0.5 predicts 1.
"""

import warnings
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
from sklearn.ensemble import RandomForestClassifier

from ..core.logging_utils import get_component_logger
from ..core.seeding import derive_seed
from ..core.validation import ValidationError, validate_ratio_param
from ..learners import ClassifierKind, accuracy, make_estimator
from .metadataset import MetaInstance, feature_matrix, label_vector

logger = get_component_logger("metalearning")

POOLED = "pooled"
THRESHOLD = 0.5


@dataclass(frozen=True)
class Metamodel:
    """A trained forest, or a constant predictor when training saw a single label."""

    forest: Optional[RandomForestClassifier]
    constant_label: Optional[int]
    majority_label: int
    pooled: bool
    n_train: int
    positive_fraction: float
    clf: Optional[ClassifierKind] = None

    @property
    def degenerate(self) -> bool:
        return self.forest is None

    def score(self, X: np.ndarray) -> np.ndarray:
        """Fraction of trees voting for label 1, per row."""
        X = np.asarray(X, dtype=np.float64)
        if X.shape[0] == 0:
            return np.zeros(0)
        if self.forest is None:
            return np.full(X.shape[0], float(self.constant_label))
        positive = int(np.flatnonzero(self.forest.classes_ == 1)[0])
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            votes = np.stack([tree.predict(X) == positive for tree in self.forest.estimators_])
        return votes.mean(axis=0)

    def predict(self, X: np.ndarray) -> np.ndarray:
        return (self.score(X) >= THRESHOLD).astype(np.int64)


def train_metamodel(instances: List[MetaInstance], seed: int, pooled: bool = False) -> Metamodel:
    """Fit a random forest (the pinned RFC settings) on the predictive features."""
    if not instances:
        raise ValidationError("train_metamodel needs at least one instance")
    X = feature_matrix(instances, pooled)
    y = label_vector(instances)
    positives = int(y.sum())
    # Ties in the training majority go to 1
    majority = 1 if 2 * positives >= y.size else 0
    clfs = {instance.clf for instance in instances}
    clf = next(iter(clfs)) if len(clfs) == 1 and not pooled else None

    if np.unique(y).size < 2:
        logger.warning(f"metamodel training set has the single label {int(y[0])}; predicting it everywhere")
        return Metamodel(forest=None, constant_label=int(y[0]), majority_label=majority, pooled=pooled,
                         n_train=int(y.size), positive_fraction=positives / y.size, clf=clf)

    forest = make_estimator(ClassifierKind.RFC, seed, X.shape[1])
    forest.fit(X, y)
    return Metamodel(forest=forest, constant_label=None, majority_label=majority, pooled=pooled,
                     n_train=int(y.size), positive_fraction=positives / y.size, clf=clf)


def train_metamodels(instances: List[MetaInstance], seed: int, pooled: bool = False) -> Dict[str, Metamodel]:
    """One metamodel per base classifier, or a single pooled one keyed ``"pooled"``."""
    if pooled:
        return {POOLED: train_metamodel(instances, derive_seed(seed, "metamodel", POOLED), pooled=True)}
    models = {}
    for clf in ClassifierKind:
        subset = [instance for instance in instances if instance.clf is clf]
        if not subset:
            logger.warning(f"no meta-instances for {clf.value}; skipping its metamodel")
            continue
        models[clf.value] = train_metamodel(subset, derive_seed(seed, "metamodel", clf.value))
    return models


def model_for(models: Dict[str, Metamodel], clf: ClassifierKind) -> Optional[Metamodel]:
    if POOLED in models:
        return models[POOLED]
    return models.get(ClassifierKind.parse(clf).value)


@dataclass(frozen=True)
class MetaEvaluation:
    accuracy: float
    mode_baseline_accuracy: float
    n: int


def evaluate_metamodel(model: Metamodel, holdout: List[MetaInstance]) -> MetaEvaluation:
    """Holdout accuracy next to always predicting the training majority label."""
    if not holdout:
        raise ValidationError("evaluate_metamodel needs a nonempty holdout")
    truth = label_vector(holdout)
    predicted = model.predict(feature_matrix(holdout, model.pooled))
    return MetaEvaluation(
        accuracy=accuracy(predicted, truth),
        mode_baseline_accuracy=accuracy(np.full(truth.size, model.majority_label), truth),
        n=int(truth.size),
    )


def split_datasets(dataset_ids: List[str], seed: int, ratio: float = 0.7):
    """Seeded dataset-level split; each side keeps at least one dataset."""
    ratio = validate_ratio_param(ratio, "ratio")
    ids = sorted(set(dataset_ids))
    if len(ids) < 2:
        raise ValidationError(f"a dataset-level split needs at least 2 datasets, got {len(ids)}")
    order = np.random.default_rng(seed).permutation(len(ids))
    n_train = min(max(int(np.floor(ratio * len(ids) + 1e-9)), 1), len(ids) - 1)
    return sorted(ids[i] for i in order[:n_train]), sorted(ids[i] for i in order[n_train:])


def evaluate_by_dataset_split(instances: List[MetaInstance], seed: int, ratio: float = 0.7,
                              pooled: bool = False) -> pd.DataFrame:
    """Train on a 70/30 dataset-level split and report per classifier plus overall.

    The overall row pools every classifier's holdout predictions.
    """
    train_ids, test_ids = split_datasets([i.dataset_id for i in instances], derive_seed(seed, "meta-split"), ratio)
    train_set = [i for i in instances if i.dataset_id in set(train_ids)]
    test_set = [i for i in instances if i.dataset_id in set(test_ids)]
    models = train_metamodels(train_set, seed, pooled=pooled)

    rows = []
    correct = baseline_correct = n_train_total = n_test_total = 0
    for clf in ClassifierKind:
        holdout = [i for i in test_set if i.clf is clf]
        model = model_for(models, clf)
        if model is None or not holdout:
            continue
        result = evaluate_metamodel(model, holdout)
        n_train = sum(1 for i in train_set if i.clf is clf)
        rows.append({"clf": clf.value, "accuracy": result.accuracy,
                     "mode_baseline_accuracy": result.mode_baseline_accuracy,
                     "n_train": n_train, "n_test": result.n})
        correct += result.accuracy * result.n
        baseline_correct += result.mode_baseline_accuracy * result.n
        n_train_total += n_train
        n_test_total += result.n

    if n_test_total == 0:
        raise ValidationError("the holdout datasets have no meta-instances to evaluate")
    rows.append({"clf": "overall", "accuracy": correct / n_test_total,
                 "mode_baseline_accuracy": baseline_correct / n_test_total,
                 "n_train": n_train_total, "n_test": n_test_total})
    logger.info(f"Metamodel holdout accuracy {correct / n_test_total:.3f} over {n_test_total} instances")
    return pd.DataFrame(rows).set_index("clf")
