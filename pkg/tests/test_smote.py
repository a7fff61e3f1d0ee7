import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from airesample.errors import DomainError, NoNeighborError
from airesample.smote import SmoteParams, k_nearest, neighbor_table, smote_draws, smote_sample, synthesize


def brute_knn(cell, i, k):
    """Reference neighbour list: sort (distance, index) pairs in plain Python."""
    pairs = []
    for j, row in enumerate(cell):
        if j != i:
            d = sum((float(a) - float(b)) ** 2 for a, b in zip(cell[i], row))
            pairs.append((d, j))
    pairs.sort()
    return [j for _, j in pairs[: min(k, len(cell) - 1)]]


def test_k_nearest_examples():
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [5.0, 0.0]])
    assert k_nearest(pts, 0, 1).tolist() == [1]
    assert k_nearest(pts, 0, 5).tolist() == [1, 2]


def test_k_nearest_ties_go_to_lower_index():
    pts = np.array([[0.0], [1.0], [-1.0], [1.0]])
    assert k_nearest(pts, 0, 3).tolist() == [1, 2, 3]
    grid = np.array([[x, y] for x in range(4) for y in range(4)], dtype=float)
    for i in range(len(grid)):
        assert k_nearest(grid, i, 6).tolist() == brute_knn(grid, i, 6)
        assert neighbor_table(grid, 6)[i].tolist() == brute_knn(grid, i, 6)


def test_k_nearest_matches_brute_force():
    rng = np.random.default_rng(0)
    pts = rng.normal(size=(50, 3))
    table = neighbor_table(pts, 5)
    for i in range(50):
        expected = brute_knn(pts, i, 5)
        assert k_nearest(pts, i, 5).tolist() == expected
        assert table[i].tolist() == expected


def test_k_nearest_errors():
    with pytest.raises(NoNeighborError):
        k_nearest(np.zeros((1, 2)), 0, 3)
    with pytest.raises(DomainError):
        k_nearest(np.zeros((3, 2)), 3, 1)
    with pytest.raises(DomainError):
        SmoteParams(k=0)


def test_synthesize():
    assert synthesize([0, 0], [2, 4], 0.25).tolist() == [0.5, 1.0]
    a, b = np.array([0.3, -7.1]), np.array([1.9, 2.2])
    assert np.array_equal(synthesize(a, b, 0.0), a)
    assert np.array_equal(synthesize(a, b, 1.0), b)
    with pytest.raises(DomainError):
        synthesize(a, b, 1.5)
    with pytest.raises(DomainError):
        synthesize(a, [1.0], 0.5)


def test_single_row_cell_duplicates():
    out = smote_sample(np.array([[1.5, -2.0]]), 3, SmoteParams(seed=4))
    assert out.tolist() == [[1.5, -2.0]] * 3


def test_count_zero_and_negative():
    assert smote_sample(np.ones((4, 2)), 0).shape == (0, 2)
    with pytest.raises(DomainError):
        smote_sample(np.ones((4, 2)), -1)


def test_rows_follow_recorded_draws():
    rng = np.random.default_rng(8)
    cell = rng.normal(size=(12, 4))
    dr = smote_draws(cell, 40, SmoteParams(k=3, seed=2))
    for z, s, n, u in zip(dr.rows, dr.anchors, dr.neighbors, dr.u):
        assert 0.0 <= u < 1.0
        assert n in brute_knn(cell, s, 3)
        assert np.allclose(z, cell[s] + u * (cell[n] - cell[s]), rtol=0, atol=1e-12)


def test_round_robin_anchor_counts():
    cell = np.random.default_rng(1).normal(size=(7, 2))
    dr = smote_draws(cell, 23, SmoteParams(seed=9))
    counts = np.bincount(dr.anchors, minlength=7)
    assert set(counts.tolist()) <= {23 // 7, 23 // 7 + 1}


def test_gaussian_mean_within_three_se():
    rng = np.random.default_rng(12)
    cell = rng.normal(loc=[2.0, -1.0, 0.5], size=(20, 3))
    out = smote_sample(cell, 100, SmoteParams(seed=3))
    se = cell.std(axis=0, ddof=1) / np.sqrt(100)
    assert np.all(np.abs(out.mean(axis=0) - cell.mean(axis=0)) <= 3 * se)


def test_determinism():
    cell = np.random.default_rng(0).normal(size=(9, 2))
    a = smote_sample(cell, 30, SmoteParams(seed=5))
    b = smote_sample(cell, 30, SmoteParams(seed=5))
    c = smote_sample(cell, 30, SmoteParams(seed=6))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 15), st.integers(1, 4), st.integers(0, 60), st.integers(1, 7), st.integers(0, 2**31))
def test_synthetic_rows_stay_in_bounding_box(m, p, count, k, seed):
    cell = np.random.default_rng(seed).normal(size=(m, p))
    out = smote_sample(cell, count, SmoteParams(k=k, seed=seed))
    assert out.shape == (count, p)
    if count:
        assert np.all(out >= cell.min(axis=0) - 1e-12)
        assert np.all(out <= cell.max(axis=0) + 1e-12)
