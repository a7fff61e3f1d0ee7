import numpy as np

from ._base import BinaryClassifier, sigmoid


class LinearDiscriminant(BinaryClassifier):
    """Two-class linear discriminant analysis with a pooled covariance.

    ``ridge`` is added to the diagonal of the pooled covariance before it is
    inverted, which keeps collinear or duplicated features solvable.
    """

    def __init__(self, ridge=1e-6):
        self.ridge = float(ridge)

    def fit(self, X, y):
        X, y = self._check_fit(X, y)
        n, p = X.shape
        means = np.empty((2, p))
        scatter = np.zeros((p, p))
        priors = np.empty(2)
        for c in (0, 1):
            Xc = X[y == c]
            means[c] = Xc.mean(axis=0)
            D = Xc - means[c]
            scatter += D.T @ D
            priors[c] = len(Xc) / n
        dof = n - 2 if n > 2 else n
        cov = scatter / dof + self.ridge * np.eye(p)
        self.means_ = means
        self.covariance_ = cov
        self.coef_ = np.linalg.solve(cov, means[1] - means[0])
        self.intercept_ = float(
            -0.5 * (means[1] + means[0]) @ self.coef_ + np.log(priors[1] / priors[0])
        )
        return self

    def predict_proba(self, X):
        X = self._check_X(X)
        return sigmoid(X @ self.coef_ + self.intercept_)
