import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from airesample import _ext
from airesample._ext import fallback

compiled = pytest.importorskip("airesample._ext._kernels", reason="compiled kernels not built")

# small integer grids produce plenty of exact distance and value ties
coords = st.integers(-3, 3).map(float) | st.floats(-1e3, 1e3, allow_nan=False, width=64)


def matrices(max_rows=30, max_cols=4):
    return st.integers(1, max_cols).flatmap(
        lambda p: arrays(np.float64, st.tuples(st.integers(1, max_rows), st.just(p)), elements=coords)
    )


def test_backend_selection():
    assert _ext.BACKEND in ("cython", "python")
    if _ext.BACKEND == "cython":
        assert _ext.knn_indices is compiled.knn_indices


@settings(max_examples=200, deadline=None)
@given(matrices(), st.integers(1, 8), st.booleans())
def test_knn_backends_agree(train, k, exclude_self):
    query = train if exclude_self else train[::-1] + 0.5
    a = fallback.knn_indices(train, query, k, exclude_self)
    b = compiled.knn_indices(train, query, k, exclude_self)
    assert a.shape == b.shape
    assert np.array_equal(a, b)


def test_knn_large_chunked_input():
    rng = np.random.default_rng(0)
    train = rng.integers(-4, 5, size=(700, 3)).astype(float)
    query = rng.integers(-4, 5, size=(600, 3)).astype(float)
    assert np.array_equal(fallback.knn_indices(train, query, 7), compiled.knn_indices(train, query, 7))


@settings(max_examples=200, deadline=None)
@given(matrices(max_rows=40), st.data())
def test_best_split_backends_agree(X, data):
    y = data.draw(arrays(np.float64, X.shape[0], elements=st.sampled_from([0.0, 1.0])))
    feats = data.draw(st.permutations(range(X.shape[1])))
    a = fallback.best_split(X, y, feats)
    b = compiled.best_split(X, y, feats)
    assert a == b


def test_best_split_known_case():
    X = np.array([[1.0], [2.0], [3.0], [4.0]])
    f, t, s = fallback.best_split(X, np.array([0, 0, 1, 1]), [0])
    assert (f, t, s) == (0, 2.5, 0.0)
    assert fallback.best_split(np.ones((3, 1)), np.array([0, 1, 0]), [0])[0] == -1


def test_midpoint_falls_back_to_lower_value():
    lo = 1.0
    hi = np.nextafter(lo, 2.0)
    X = np.array([[lo], [hi]])
    for impl in (fallback.best_split, compiled.best_split):
        f, t, _ = impl(X, np.array([0.0, 1.0]), [0])
        assert f == 0 and lo <= t < hi
