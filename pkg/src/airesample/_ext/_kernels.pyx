# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: k-nearest-neighbour search and CART split search.

Semantics match ``fallback.py`` exactly, including tie-breaking and the order
of floating-point operations.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY

cnp.import_array()


def knn_indices(train, query, k, bint exclude_self=False):
    cdef const double[:, ::1] T = np.ascontiguousarray(train, dtype=np.float64)
    cdef const double[:, ::1] Q = np.ascontiguousarray(query, dtype=np.float64)
    cdef Py_ssize_t n = T.shape[0], q = Q.shape[0], p = T.shape[1]
    cdef Py_ssize_t avail = n - 1 if exclude_self else n
    cdef Py_ssize_t kk = min(<Py_ssize_t>k, avail)
    if kk < 0:
        kk = 0
    out = np.empty((q, kk), dtype=np.intp)
    if kk == 0:
        return out
    cdef Py_ssize_t[:, ::1] O = out
    cdef double[::1] best_d = np.empty(kk, dtype=np.float64)
    cdef Py_ssize_t[::1] best_i = np.empty(kk, dtype=np.intp)
    cdef Py_ssize_t i, j, f, filled, pos
    cdef double d, diff
    with nogil:
        for i in range(q):
            filled = 0
            for j in range(n):
                if exclude_self and j == i:
                    continue
                d = 0.0
                for f in range(p):
                    diff = Q[i, f] - T[j, f]
                    d = d + diff * diff
                if filled == kk and d >= best_d[kk - 1]:
                    continue
                # insert after every entry with distance <= d (index order on ties)
                pos = filled if filled < kk else kk - 1
                while pos > 0 and best_d[pos - 1] > d:
                    best_d[pos] = best_d[pos - 1]
                    best_i[pos] = best_i[pos - 1]
                    pos -= 1
                best_d[pos] = d
                best_i[pos] = j
                if filled < kk:
                    filled += 1
            for f in range(kk):
                O[i, f] = best_i[f]
    return out


def best_split(X, y, features):
    cdef const double[:, ::1] A = np.ascontiguousarray(X, dtype=np.float64)
    cdef const double[::1] Y = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = A.shape[0]
    cdef Py_ssize_t i, best_f = -1
    cdef double best_t = 0.0, best_s = INFINITY
    cdef double total_pos = 0.0, cum, right_pos, nl, nr, s, lo, hi, thr
    cdef double feat_s, feat_lo = 0.0, feat_hi = 0.0
    cdef Py_ssize_t[::1] order
    cdef Py_ssize_t f
    for i in range(n):
        total_pos += Y[i]
    for f in features:
        order = np.argsort(np.asarray(A[:, f]), kind="stable").astype(np.intp)
        cum = 0.0
        feat_s = INFINITY
        with nogil:
            for i in range(n - 1):
                cum = cum + Y[order[i]]
                lo = A[order[i], f]
                hi = A[order[i + 1], f]
                if not hi > lo:
                    continue
                nl = <double>(i + 1)
                nr = <double>(n - i - 1)
                right_pos = total_pos - cum
                s = cum * (nl - cum) / nl + right_pos * (nr - right_pos) / nr
                if s < feat_s:
                    feat_s = s
                    feat_lo = lo
                    feat_hi = hi
        if feat_s < best_s:
            thr = (feat_lo + feat_hi) / 2.0
            if thr >= feat_hi:
                thr = feat_lo
            best_f = f
            best_t = thr
            best_s = feat_s
    return int(best_f), float(best_t), float(best_s)
