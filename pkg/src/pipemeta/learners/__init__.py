"""
Classifier Module

Pinned classifiers behind a uniform train / predict contract.
"""

from .classifiers import ClassifierKind, TrainedModel, accuracy, make_estimator, predict, train
from .neighbors import MajorityVoteNeighbors

__all__ = [
    "ClassifierKind",
    "TrainedModel",
    "MajorityVoteNeighbors",
    "make_estimator",
    "train",
    "predict",
    "accuracy",
]
