"""Logistic regression, unpenalized or L2-penalized, fitted by Newton's method."""

import warnings

import numpy as np

from ._base import BinaryClassifier, sigmoid


class LogisticRegression(BinaryClassifier):
    """Maximum-likelihood logistic regression.

    Minimizes ``(sum(log-loss) + alpha * ||w||^2) / n``; the intercept is not
    penalized. Newton steps with Armijo backtracking make the objective
    non-increasing across iterations.

    Attributes
    ----------
    coef_, intercept_
    n_iter_ : int
    grad_norm_ : float
        Euclidean norm of the objective gradient at the returned weights.
    loss_history_ : list of float
        Objective value after each iteration (first entry at w = 0).
    """

    def __init__(self, alpha=0.0, tol=1e-8, max_iter=500):
        self.alpha = float(alpha)
        self.tol = tol
        self.max_iter = max_iter

    def _objective(self, A, y, w, pen):
        z = A @ w
        return (np.sum(np.logaddexp(0.0, z) - y * z) + np.dot(pen * w, w)) / A.shape[0]

    def fit(self, X, y):
        X, y = self._check_fit(X, y)
        n = X.shape[0]
        A = np.hstack([np.ones((n, 1)), X])
        pen = np.full(A.shape[1], self.alpha)
        pen[0] = 0.0
        w = np.zeros(A.shape[1])
        loss = self._objective(A, y, w, pen)
        self.loss_history_ = [loss]
        it = 0
        for it in range(1, self.max_iter + 1):
            s = sigmoid(A @ w)
            grad = (A.T @ (s - y) + 2.0 * pen * w) / n
            if np.linalg.norm(grad) <= self.tol:
                it -= 1
                break
            H = (A.T * (s * (1.0 - s))) @ A / n + np.diag(2.0 * pen / n)
            try:
                step = np.linalg.solve(H, grad)
            except np.linalg.LinAlgError:
                step = np.linalg.lstsq(H, grad, rcond=None)[0]
            if not np.all(np.isfinite(step)) or np.dot(grad, step) <= 0:
                step = grad
            slope = np.dot(grad, step)
            eta = 1.0
            for _ in range(60):
                trial = self._objective(A, y, w - eta * step, pen)
                if trial <= loss - 1e-4 * eta * slope:
                    break
                eta *= 0.5
            else:
                break
            w = w - eta * step
            loss = trial
            self.loss_history_.append(loss)
        else:
            warnings.warn(f"logistic fit stopped after {self.max_iter} iterations", RuntimeWarning)
        s = sigmoid(A @ w)
        self.grad_norm_ = float(np.linalg.norm((A.T @ (s - y) + 2.0 * pen * w) / n))
        self.n_iter_ = it
        self.intercept_ = float(w[0])
        self.coef_ = w[1:].copy()
        return self

    def decision_function(self, X):
        X = self._check_X(X)
        return X @ self.coef_ + self.intercept_

    def predict_proba(self, X):
        return sigmoid(self.decision_function(X))
