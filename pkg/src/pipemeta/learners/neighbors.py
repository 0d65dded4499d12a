"""
k-nearest-neighbour majority vote with deterministic tie breaking.

Equidistant neighbours are taken in training-row order and tied votes go to
the lower class index.
"""

import numpy as np
from scipy.spatial.distance import cdist
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils import gen_batches
from sklearn.utils.validation import check_is_fitted

_BATCH_ROWS = 1024


class MajorityVoteNeighbors(ClassifierMixin, BaseEstimator):
    def __init__(self, n_neighbors: int = 5):
        self.n_neighbors = n_neighbors

    def fit(self, X, y):
        self.fit_X_ = np.asarray(X, dtype=np.float64)
        self.classes_, self.fit_codes_ = np.unique(np.asarray(y), return_inverse=True)
        self.k_ = int(min(self.n_neighbors, self.fit_X_.shape[0]))
        self.n_features_in_ = self.fit_X_.shape[1]
        return self

    def kneighbors(self, X) -> np.ndarray:
        """Training-row indices of the k nearest neighbours of each row of X."""
        check_is_fitted(self, "fit_X_")
        X = np.asarray(X, dtype=np.float64)
        neighbours = np.empty((X.shape[0], self.k_), dtype=np.int64)
        for batch in gen_batches(X.shape[0], _BATCH_ROWS):
            distances = cdist(X[batch], self.fit_X_, metric="euclidean")
            neighbours[batch] = np.argsort(distances, axis=1, kind="stable")[:, : self.k_]
        return neighbours

    def predict(self, X) -> np.ndarray:
        neighbours = self.kneighbors(X)
        votes = np.zeros((neighbours.shape[0], self.classes_.size), dtype=np.int64)
        rows = np.repeat(np.arange(neighbours.shape[0]), self.k_)
        np.add.at(votes, (rows, self.fit_codes_[neighbours].ravel()), 1)
        return self.classes_[np.argmax(votes, axis=1)]
