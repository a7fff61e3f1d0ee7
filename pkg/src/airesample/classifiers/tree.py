"""CART classification trees (Gini) and bagged random forests."""

import math

import numpy as np

from .. import _ext
from ..errors import DomainError
from ._base import BinaryClassifier


def _n_split_features(max_features, p):
    if max_features is None:
        return p
    if max_features == "sqrt":
        return max(1, int(math.sqrt(p)))
    if max_features == "log2":
        return max(1, int(math.log2(p)))
    m = int(max_features)
    if not 1 <= m:
        raise DomainError(f"max_features must be >= 1, got {max_features}")
    return min(m, p)


class DecisionTree(BinaryClassifier):
    """Binary CART tree grown with the Gini criterion.

    A node is split whenever it is impure, shallower than ``max_depth`` and
    some feature takes two distinct values in it. The split with the lowest
    weighted child impurity wins; ties go to the earlier feature and then the
    lower threshold. Leaves predict their share of positive rows.

    ``max_features`` (None, ``"sqrt"``, ``"log2"`` or an int) subsamples the
    features searched at each split using ``seed``.
    """

    requires_both_classes = False

    def __init__(self, max_depth=None, max_features=None, min_samples_split=2, seed=0):
        if max_depth is not None and max_depth < 1:
            raise DomainError("max_depth must be None or >= 1")
        self.max_depth = max_depth
        self.max_features = max_features
        self.min_samples_split = min_samples_split
        self.seed = seed

    def fit(self, X, y):
        X, y = self._check_fit(X, y)
        p = X.shape[1]
        m = _n_split_features(self.max_features, p)
        rng = np.random.default_rng(self.seed) if m < p else None
        all_features = np.arange(p)
        feature, threshold, left, right, value = [], [], [], [], []

        def new_node(rows):
            feature.append(-1)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            value.append(float(y[rows].mean()))
            return len(feature) - 1

        stack = [(new_node(np.arange(len(y))), np.arange(len(y)), 0)]
        depth_reached = 0
        while stack:
            node, rows, depth = stack.pop()
            depth_reached = max(depth_reached, depth)
            pos = y[rows].sum()
            if pos == 0 or pos == len(rows) or len(rows) < self.min_samples_split:
                continue
            if self.max_depth is not None and depth >= self.max_depth:
                continue
            Xn = X[rows]
            if rng is None:
                f, thr, _ = _ext.best_split(Xn, y[rows], all_features)
            else:
                order = rng.permutation(p)
                f, thr, _ = _ext.best_split(Xn, y[rows], np.sort(order[:m]))
                if f < 0:
                    f, thr, _ = _ext.best_split(Xn, y[rows], np.sort(order[m:]))
            if f < 0:
                continue
            go_left = Xn[:, f] <= thr
            lrows, rrows = rows[go_left], rows[~go_left]
            feature[node], threshold[node] = f, thr
            left[node] = new_node(lrows)
            right[node] = new_node(rrows)
            # right pushed first so the left subtree is numbered first
            stack.append((right[node], rrows, depth + 1))
            stack.append((left[node], lrows, depth + 1))

        self.feature_ = np.array(feature, dtype=np.intp)
        self.threshold_ = np.array(threshold)
        self.left_ = np.array(left, dtype=np.intp)
        self.right_ = np.array(right, dtype=np.intp)
        self.value_ = np.array(value)
        self.depth_ = depth_reached
        return self

    @property
    def node_count(self):
        return len(self.feature_)

    def apply(self, X):
        """Leaf index reached by each row."""
        X = self._check_X(X)
        node = np.zeros(X.shape[0], dtype=np.intp)
        rows = np.arange(X.shape[0])
        for _ in range(self.depth_ + 1):
            f = self.feature_[node]
            inner = f >= 0
            if not inner.any():
                break
            r, n, ff = rows[inner], node[inner], f[inner]
            go_left = X[r, ff] <= self.threshold_[n]
            node[r] = np.where(go_left, self.left_[n], self.right_[n])
        return node

    def predict_proba(self, X):
        return self.value_[self.apply(X)]


class RandomForest(BinaryClassifier):
    """Bagged CART trees with per-split feature subsampling.

    Tree ``i`` is fitted to a bootstrap sample drawn from
    ``default_rng(seed)`` and gets its own seed from the same stream.
    """

    requires_both_classes = False

    def __init__(self, n_trees=100, max_depth=None, max_features="sqrt", seed=0):
        if n_trees < 1:
            raise DomainError("n_trees must be at least 1")
        self.n_trees = int(n_trees)
        self.max_depth = max_depth
        self.max_features = max_features
        self.seed = seed

    def fit(self, X, y):
        X, y = self._check_fit(X, y)
        rng = np.random.default_rng(self.seed)
        n = X.shape[0]
        self.trees_ = []
        for _ in range(self.n_trees):
            idx = rng.integers(0, n, size=n)
            tree_seed = int(rng.integers(2**63))
            tree = DecisionTree(self.max_depth, self.max_features, seed=tree_seed)
            self.trees_.append(tree.fit(X[idx], y[idx]))
        return self

    def predict_proba(self, X):
        X = self._check_X(X)
        return np.mean([t.predict_proba(X) for t in self.trees_], axis=0)
