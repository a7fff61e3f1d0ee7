"""Shared input checks for the probabilistic classifiers."""

import numpy as np

from ..errors import DegenerateFitError, DomainError


def sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


class BinaryClassifier:
    """Base class: ``fit(X, y)`` then ``predict_proba(X)`` -> P(y = 1) per row."""

    requires_both_classes = True

    def _check_fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        y = np.asarray(y)
        if X.ndim != 2 or X.shape[0] != y.shape[0]:
            raise DomainError(f"X {X.shape} and y {y.shape} are not row-aligned")
        if X.shape[0] < 1:
            raise DomainError("cannot fit on zero rows")
        if not np.all(np.isfinite(X)):
            raise DomainError("X contains non-finite values")
        if not np.all((y == 0) | (y == 1)):
            raise DomainError("y must be binary 0/1")
        y = y.astype(np.float64)
        if self.requires_both_classes and (y.min() == y.max()):
            raise DegenerateFitError(f"{type(self).__name__} needs both classes in y")
        self.n_features_ = X.shape[1]
        return X, y

    def _check_X(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(-1, self.n_features_)
        if X.ndim != 2 or X.shape[1] != self.n_features_:
            raise DomainError(f"expected {self.n_features_} columns, got shape {X.shape}")
        if not np.all(np.isfinite(X)):
            raise DomainError("X contains non-finite values")
        return X
