"""From-scratch probabilistic binary classifiers with a uniform fit/score contract."""

from __future__ import annotations

import enum
import pickle
from dataclasses import dataclass, field

import numpy as np

from .. import __version__
from ..errors import DomainError
from ._base import BinaryClassifier
from .bayes import GaussianNB
from .knn import KNearestNeighbors
from .lda import LinearDiscriminant
from .linear import LogisticRegression
from .tree import DecisionTree, RandomForest


class Kind(str, enum.Enum):
    LOGISTIC = "LOGISTIC"
    RIDGE_LOGISTIC = "RIDGE_LOGISTIC"
    GAUSSIAN_NB = "GAUSSIAN_NB"
    LDA = "LDA"
    KNN = "KNN"
    DECISION_TREE = "DECISION_TREE"
    RANDOM_FOREST = "RANDOM_FOREST"


# hyperparameter name -> candidate values, in declaration order
DEFAULT_GRIDS = {
    Kind.LOGISTIC: {},
    Kind.RIDGE_LOGISTIC: {"alpha": [0.5, 1.0, 5.0, 10.0]},
    Kind.GAUSSIAN_NB: {"smoothing": [1e-8, 1e-9, 1e-10]},
    Kind.LDA: {"ridge": [1e-6, 1e-3, 1e-1]},
    Kind.KNN: {"n_neighbors": [3, 5, 10, 15]},
    Kind.DECISION_TREE: {"max_depth": [None, 3, 8, 15]},
    Kind.RANDOM_FOREST: {"n_trees": [50, 100, 150, 200]},
}

_DEFAULTS = {
    Kind.LOGISTIC: {},
    Kind.RIDGE_LOGISTIC: {"alpha": 1.0},
    Kind.GAUSSIAN_NB: {"smoothing": 1e-9},
    Kind.LDA: {"ridge": 1e-6},
    Kind.KNN: {"n_neighbors": 5},
    Kind.DECISION_TREE: {"max_depth": None},
    Kind.RANDOM_FOREST: {"n_trees": 100, "max_depth": None, "max_features": "sqrt", "seed": 0},
}


@dataclass(frozen=True)
class ClassifierSpec:
    kind: Kind
    hyperparams: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        unknown = set(self.hyperparams) - set(_DEFAULTS[self.kind]) - {"seed", "max_features"}
        if unknown:
            raise DomainError(f"{self.kind.value} does not take {sorted(unknown)}")

    def params(self) -> dict:
        return {**_DEFAULTS[self.kind], **self.hyperparams}


def build(spec: ClassifierSpec) -> BinaryClassifier:
    hp = spec.params()
    kind = spec.kind
    if kind is Kind.LOGISTIC:
        return LogisticRegression(alpha=0.0)
    if kind is Kind.RIDGE_LOGISTIC:
        return LogisticRegression(alpha=hp["alpha"])
    if kind is Kind.GAUSSIAN_NB:
        return GaussianNB(smoothing=hp["smoothing"])
    if kind is Kind.LDA:
        return LinearDiscriminant(ridge=hp["ridge"])
    if kind is Kind.KNN:
        return KNearestNeighbors(n_neighbors=hp["n_neighbors"])
    if kind is Kind.DECISION_TREE:
        return DecisionTree(
            max_depth=hp["max_depth"], max_features=hp.get("max_features"), seed=hp.get("seed", 0)
        )
    return RandomForest(
        n_trees=hp["n_trees"], max_depth=hp["max_depth"], max_features=hp["max_features"], seed=hp["seed"]
    )


def fit(spec: ClassifierSpec, X, y) -> BinaryClassifier:
    """Fit the model described by ``spec``; the result supports :func:`predict_proba`."""
    return build(spec).fit(X, y)


def predict_proba(model: BinaryClassifier, X) -> np.ndarray:
    """P(outcome = 1) for each row of ``X``, clipped to [0, 1]."""
    return np.clip(model.predict_proba(X), 0.0, 1.0)


_MAGIC = b"AIRESAMPLE-MODEL\n"


def save_model(model: BinaryClassifier, path) -> None:
    """Pickle ``model`` behind a version header (format is private and may change)."""
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(f"{__version__}\n".encode())
        pickle.dump(model, fh, protocol=pickle.HIGHEST_PROTOCOL)


def load_model(path) -> BinaryClassifier:
    with open(path, "rb") as fh:
        if fh.readline() != _MAGIC:
            raise DomainError(f"{path} is not a saved model")
        version = fh.readline().decode().strip()
        if version != __version__:
            raise DomainError(f"model saved by version {version}, this is {__version__}")
        return pickle.load(fh)


from .tuning import grid_scores, grid_tune  # noqa: E402

__all__ = [
    "BinaryClassifier",
    "ClassifierSpec",
    "DEFAULT_GRIDS",
    "DecisionTree",
    "GaussianNB",
    "KNearestNeighbors",
    "Kind",
    "LinearDiscriminant",
    "LogisticRegression",
    "RandomForest",
    "build",
    "fit",
    "grid_scores",
    "grid_tune",
    "load_model",
    "predict_proba",
    "save_model",
]
