"""SMOTE: synthetic rows on segments between a cell row and a near neighbour."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _ext
from .errors import DomainError, NoNeighborError


@dataclass(frozen=True)
class SmoteParams:
    k: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise DomainError(f"SMOTE needs k >= 1, got {self.k}")


@dataclass(frozen=True, eq=False)
class SmoteDraws:
    """Synthetic rows plus the (anchor, neighbour, u) that produced each.

    ``neighbors`` is -1 where the cell had a single row and the anchor was
    duplicated.
    """

    rows: np.ndarray
    anchors: np.ndarray
    neighbors: np.ndarray
    u: np.ndarray


def k_nearest(cell, i: int, k: int) -> np.ndarray:
    """The ``min(k, m - 1)`` rows nearest to row ``i`` (Euclidean), nearest first.

    Ties in distance go to the lower index.
    """
    cell = np.asarray(cell, dtype=np.float64)
    m = cell.shape[0]
    if m < 2:
        raise NoNeighborError("a single-row cell has no neighbours")
    if not 0 <= i < m:
        raise DomainError(f"row {i} outside 0..{m - 1}")
    if k < 1:
        raise DomainError("k must be at least 1")
    d2 = ((cell - cell[i]) ** 2).sum(axis=1)
    d2[i] = np.inf
    order = np.lexsort((np.arange(m), d2))
    return order[: min(k, m - 1)]


def neighbor_table(cell, k: int) -> np.ndarray:
    """k-nearest-neighbour indices for every row of ``cell`` (shape m x min(k, m-1))."""
    return _ext.knn_indices(cell, cell, k, exclude_self=True)


def synthesize(x_i, x_nn, u: float) -> np.ndarray:
    """Point ``x_i + u * (x_nn - x_i)`` on the segment between the two rows."""
    x_i = np.asarray(x_i, dtype=np.float64)
    x_nn = np.asarray(x_nn, dtype=np.float64)
    if x_i.shape != x_nn.shape:
        raise DomainError("rows differ in dimension")
    if not 0.0 <= u <= 1.0:
        raise DomainError(f"u must lie in [0, 1], got {u}")
    if u == 1.0:
        # x_i + (x_nn - x_i) can be off by an ulp
        return x_nn.copy()
    return x_i + u * (x_nn - x_i)


def smote_draws(cell, count: int, params: SmoteParams = SmoteParams()) -> SmoteDraws:
    """Generate ``count`` synthetic rows from ``cell`` and record how.

    Anchors cycle through a seeded permutation of the cell, so every row
    anchors either floor(count/m) or ceil(count/m) synthetics. Each anchor
    takes a uniformly chosen neighbour from its k-nearest set and ``u`` from
    [0, 1). A single-row cell is duplicated instead.
    """
    cell = np.asarray(cell, dtype=np.float64)
    if cell.ndim != 2 or cell.shape[0] < 1:
        raise DomainError("SMOTE needs a non-empty 2-D cell")
    if count < 0:
        raise DomainError(f"count must be non-negative, got {count}")
    m, p = cell.shape
    rng = np.random.default_rng(params.seed)
    perm = rng.permutation(m)
    anchors = perm[np.arange(count) % m]
    if m == 1:
        return SmoteDraws(
            np.repeat(cell, count, axis=0),
            anchors,
            np.full(count, -1, dtype=np.intp),
            np.zeros(count),
        )
    table = neighbor_table(cell, params.k)
    pick = rng.integers(0, table.shape[1], size=count)
    u = rng.random(count)
    neighbors = table[anchors, pick]
    base = cell[anchors]
    rows = base + u[:, None] * (cell[neighbors] - base)
    return SmoteDraws(rows, anchors, neighbors, u)


def smote_sample(cell, count: int, params: SmoteParams = SmoteParams()) -> np.ndarray:
    """``count`` x p matrix of synthetic rows; see :func:`smote_draws`."""
    return smote_draws(cell, count, params).rows
