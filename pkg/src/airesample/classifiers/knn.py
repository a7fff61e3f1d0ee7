import numpy as np

from .. import _ext
from ..errors import DomainError
from ._base import BinaryClassifier


class KNearestNeighbors(BinaryClassifier):
    """Euclidean k-nearest-neighbour vote; P(y = 1) is the share of positive neighbours.

    Equidistant training rows are ranked by their training index.
    """

    requires_both_classes = False

    def __init__(self, n_neighbors=5):
        if n_neighbors < 1:
            raise DomainError("n_neighbors must be at least 1")
        self.n_neighbors = int(n_neighbors)

    def fit(self, X, y):
        X, y = self._check_fit(X, y)
        self.X_ = np.ascontiguousarray(X)
        self.y_ = y
        return self

    def kneighbors(self, X):
        return _ext.knn_indices(self.X_, self._check_X(X), self.n_neighbors)

    def predict_proba(self, X):
        idx = self.kneighbors(X)
        return self.y_[idx].mean(axis=1)
