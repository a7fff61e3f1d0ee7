"""Group x outcome stratified k-fold assignment."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import Dataset, group_cells
from .errors import DomainError, InfeasibleError


@dataclass(frozen=True, eq=False)
class FoldAssignment:
    fold_of: np.ndarray
    k: int

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.fold_of == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.fold_of != fold)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.fold_of, minlength=self.k)

    def to_csv(self, d: Dataset, path) -> None:
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["row_id", "fold"])
            for rid, f in zip(d.row_id, self.fold_of):
                w.writerow([rid, int(f)])


def deal_folds(cells, n: int, k: int, seed: int) -> np.ndarray:
    """Shuffle each cell and deal its rows round-robin over ``k`` folds.

    The dealing position carries over from one cell to the next, so cell
    remainders spread over different folds and fold sizes stay within one row
    of each other. Cells are visited in the order given.
    """
    if k < 2:
        raise DomainError(f"k must be at least 2, got {k}")
    if k > n:
        raise InfeasibleError(f"cannot split {n} rows into {k} folds")
    rng = np.random.default_rng(seed)
    fold_of = np.full(n, -1, dtype=np.intp)
    start = 0
    for rows in cells:
        rows = rng.permutation(np.asarray(rows, dtype=np.intp))
        fold_of[rows] = (start + np.arange(len(rows))) % k
        start = (start + len(rows)) % k
    return fold_of


def stratified_kfold(d: Dataset, k: int, seed: int) -> FoldAssignment:
    """Assign every row of ``d`` to one of ``k`` folds, stratified by (group, outcome)."""
    fold_of = deal_folds(group_cells(d).values(), d.n, k, seed)
    return FoldAssignment(fold_of, int(k))


def stratified_label_folds(y, k: int, seed: int) -> np.ndarray:
    """Fold index per row, stratified on the labels ``y`` alone (inner CV)."""
    y = np.asarray(y)
    cells = [np.flatnonzero(y == v) for v in np.unique(y)]
    return deal_folds(cells, len(y), k, seed)


def train_test_views(d: Dataset, f: FoldAssignment, test_fold: int) -> tuple[Dataset, Dataset]:
    """Split ``d`` into (train, test); row order is preserved in both."""
    if not 0 <= test_fold < f.k:
        raise DomainError(f"test_fold {test_fold} outside 0..{f.k - 1}")
    return d.take(f.train_indices(test_fold)), d.take(f.test_indices(test_fold))
