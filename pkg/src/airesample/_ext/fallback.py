"""Pure-numpy versions of the compiled kernels.

Both backends must agree bit for bit, so the floating-point operations here
follow the same order as the loops in ``_kernels.pyx``: squared distances
accumulate feature by feature, and split scores are built from integer
class counts.
"""

import numpy as np

_CHUNK = 256


def sq_distances(query, train):
    """Squared Euclidean distances, shape (len(query), len(train))."""
    query = np.ascontiguousarray(query, dtype=np.float64)
    train = np.ascontiguousarray(train, dtype=np.float64)
    d2 = np.zeros((query.shape[0], train.shape[0]))
    for j in range(query.shape[1]):
        diff = query[:, j, None] - train[None, :, j]
        d2 += diff * diff
    return d2


def knn_indices(train, query, k, exclude_self=False):
    """Indices of the ``k`` nearest training rows for every query row.

    Rows come back nearest first; equal distances are ordered by ascending
    training index. With ``exclude_self`` the query is the training matrix and
    row ``i`` is not its own neighbour.
    """
    train = np.ascontiguousarray(train, dtype=np.float64)
    query = np.ascontiguousarray(query, dtype=np.float64)
    n, q = train.shape[0], query.shape[0]
    avail = n - 1 if exclude_self else n
    k = min(int(k), avail)
    out = np.empty((q, k), dtype=np.intp)
    if k <= 0:
        return out
    for start in range(0, q, _CHUNK):
        stop = min(start + _CHUNK, q)
        d2 = sq_distances(query[start:stop], train)
        if exclude_self:
            rows = np.arange(start, stop)
            d2[rows - start, rows] = np.inf
        # stable sort keeps ascending index among equal distances
        order = np.argsort(d2, axis=1, kind="stable")
        out[start:stop] = order[:, :k]
    return out


def best_split(X, y, features):
    """Best Gini split of a node.

    Parameters
    ----------
    X : ndarray of shape (n, p)
    y : ndarray of shape (n,) with values in {0, 1}
    features : sequence of int
        Candidate feature columns, searched in the given order.

    Returns
    -------
    (feature, threshold, score) where ``score`` is the weighted child impurity
    ``sum(a * (m - a) / m)`` over both children (half the Gini-weighted sum).
    ``feature`` is -1 when no split separates the rows.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y).astype(np.float64)
    n = X.shape[0]
    best_f, best_t, best_s = -1, 0.0, np.inf
    total_pos = y.sum()
    n_left = np.arange(1, n, dtype=np.float64)
    n_right = n - n_left
    for f in features:
        order = np.argsort(X[:, f], kind="stable")
        xs = X[order, f]
        cum = np.cumsum(y[order])[:-1]
        valid = xs[1:] > xs[:-1]
        if not valid.any():
            continue
        right_pos = total_pos - cum
        score = cum * (n_left - cum) / n_left + right_pos * (n_right - right_pos) / n_right
        score = np.where(valid, score, np.inf)
        i = int(np.argmin(score))
        if score[i] < best_s:
            lo, hi = xs[i], xs[i + 1]
            thr = (lo + hi) / 2.0
            if thr >= hi:
                thr = lo
            best_f, best_t, best_s = int(f), float(thr), float(score[i])
    return best_f, best_t, best_s
