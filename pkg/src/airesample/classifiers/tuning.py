"""Exhaustive grid search scored by stratified inner cross-validation."""

import itertools

import numpy as np

from ..errors import DegenerateFitError
from ..splitter import stratified_label_folds
from . import DEFAULT_GRIDS, ClassifierSpec, Kind, fit, predict_proba


def grid_points(grid):
    """Cartesian product of ``grid`` as a list of dicts, in declaration order."""
    names = list(grid)
    return [dict(zip(names, combo)) for combo in itertools.product(*(grid[k] for k in names))]


def _fold_accuracy(spec, X_tr, y_tr, X_te, y_te):
    try:
        model = fit(spec, X_tr, y_tr)
    except DegenerateFitError:
        # single-class training fold: score the constant prediction
        return float(np.mean(y_te == y_tr[0]))
    pred = (predict_proba(model, X_te) > 0.5).astype(y_te.dtype)
    return float(np.mean(pred == y_te))


def grid_scores(kind, X, y, grid=None, inner_k=5, seed=0, fixed=None):
    """Mean inner-CV accuracy of every grid point, as ``[(hyperparams, score)]``."""
    kind = Kind(kind)
    grid = DEFAULT_GRIDS[kind] if grid is None else grid
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    folds = stratified_label_folds(y, inner_k, seed)
    out = []
    for point in grid_points(grid):
        spec = ClassifierSpec(kind, {**(fixed or {}), **point})
        accs = [
            _fold_accuracy(spec, X[folds != f], y[folds != f], X[folds == f], y[folds == f])
            for f in range(inner_k)
        ]
        out.append((point, float(np.mean(accs))))
    return out


def grid_tune(kind, X, y, grid=None, inner_k=5, seed=0, fixed=None) -> ClassifierSpec:
    """Best grid point by mean inner-CV accuracy; ties go to the earlier point.

    A grid with one point (or none, e.g. plain logistic regression) is
    returned without cross-validation. ``fixed`` hyperparameters are applied
    to every point.
    """
    kind = Kind(kind)
    grid = DEFAULT_GRIDS[kind] if grid is None else grid
    points = grid_points(grid)
    if len(points) <= 1:
        return ClassifierSpec(kind, {**(fixed or {}), **(points[0] if points else {})})
    scores = grid_scores(kind, X, y, grid, inner_k, seed, fixed)
    best = max(range(len(scores)), key=lambda i: (scores[i][1], -i))
    return ClassifierSpec(kind, {**(fixed or {}), **scores[best][0]})
