import numpy as np

from ._base import BinaryClassifier, sigmoid


class GaussianNB(BinaryClassifier):
    """Gaussian naive Bayes with class-frequency priors.

    Every class-conditional variance is widened by
    ``smoothing * max(feature variance)``.
    """

    def __init__(self, smoothing=1e-9):
        self.smoothing = float(smoothing)

    def fit(self, X, y):
        X, y = self._check_fit(X, y)
        floor = self.smoothing * float(np.var(X, axis=0).max())
        if floor == 0.0:
            floor = self.smoothing or np.finfo(float).tiny
        self.theta_ = np.empty((2, X.shape[1]))
        self.var_ = np.empty((2, X.shape[1]))
        self.class_log_prior_ = np.empty(2)
        for c in (0, 1):
            Xc = X[y == c]
            self.theta_[c] = Xc.mean(axis=0)
            self.var_[c] = Xc.var(axis=0) + floor
            self.class_log_prior_[c] = np.log(len(Xc) / len(X))
        return self

    def _joint_log_likelihood(self, X):
        jll = np.empty((X.shape[0], 2))
        for c in (0, 1):
            ll = -0.5 * np.sum(np.log(2.0 * np.pi * self.var_[c]))
            ll = ll - 0.5 * np.sum((X - self.theta_[c]) ** 2 / self.var_[c], axis=1)
            jll[:, c] = self.class_log_prior_[c] + ll
        return jll

    def predict_proba(self, X):
        jll = self._joint_log_likelihood(self._check_X(X))
        return sigmoid(jll[:, 1] - jll[:, 0])
