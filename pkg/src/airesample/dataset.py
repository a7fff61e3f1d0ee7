"""Applicant-pool data model, CSV ingestion and group x outcome cells."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import EmptyInputError, ParseError, SchemaError, ValidationError

#: Separator between a source row id and its provenance tag.
PROVENANCE_SEP = "#"
DUPLICATE_TAG = "dup"
SMOTE_TAG = "smote"


def _frozen(arr):
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Dataset:
    """Row-aligned applicant pool.

    Parameters
    ----------
    features : array-like of shape (N, p)
        Finite predictor scores.
    outcome : array-like of shape (N,)
        1 = screened in (pass), 0 = screened out (fail).
    group : array-like of shape (N,)
        Demographic label of each row.
    row_id : array-like of shape (N,)
        Unique row identifiers.
    feature_names : sequence of str, optional
        Column names used when writing CSV. Defaults to ``f1..fp``.
    """

    features: np.ndarray
    outcome: np.ndarray
    group: np.ndarray
    row_id: np.ndarray
    feature_names: tuple = field(default=())

    def __post_init__(self):
        X = np.asarray(self.features, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        y = np.asarray(self.outcome)
        g = np.asarray(self.group, dtype=object)
        ids = np.asarray(self.row_id, dtype=object)

        if X.ndim != 2:
            raise ValidationError("features must be a 2-D matrix")
        n, p = X.shape
        if n < 1:
            raise EmptyInputError("Dataset needs at least one row")
        if p < 1:
            raise ValidationError("Dataset needs at least one feature")
        if not (len(y) == len(g) == len(ids) == n):
            raise ValidationError(
                f"length mismatch: features={n}, outcome={len(y)}, group={len(g)}, row_id={len(ids)}"
            )
        if not np.all(np.isfinite(X)):
            raise ValidationError("features contain non-finite values")
        if not np.all((y == 0) | (y == 1)):
            raise ValidationError("outcome values must be 0 or 1")
        y = y.astype(np.int8)
        for label in g:
            if not isinstance(label, str) or not label:
                raise ValidationError(f"group labels must be non-empty strings, got {label!r}")
        ids = np.array([str(i) for i in ids], dtype=object)
        if len(set(ids)) != n:
            raise ValidationError("row_id values are not unique")

        names = tuple(self.feature_names) or tuple(f"f{j + 1}" for j in range(p))
        if len(names) != p:
            raise ValidationError(f"{len(names)} feature names for {p} features")

        object.__setattr__(self, "features", _frozen(X))
        object.__setattr__(self, "outcome", _frozen(y))
        object.__setattr__(self, "group", _frozen(g))
        object.__setattr__(self, "row_id", _frozen(ids))
        object.__setattr__(self, "feature_names", names)

    def __len__(self):
        return self.features.shape[0]

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def p(self) -> int:
        return self.features.shape[1]

    def take(self, indices) -> "Dataset":
        """Return the rows at ``indices`` in the given order."""
        idx = np.asarray(indices, dtype=np.intp)
        return Dataset(
            self.features[idx],
            self.outcome[idx],
            self.group[idx],
            self.row_id[idx],
            self.feature_names,
        )

    def groups(self) -> list[str]:
        """Distinct group labels in order of first appearance."""
        return list(dict.fromkeys(self.group.tolist()))

    def equals(self, other: "Dataset") -> bool:
        """Field-by-field equality (features compared exactly)."""
        return (
            self.feature_names == other.feature_names
            and self.features.shape == other.features.shape
            and np.array_equal(self.features, other.features)
            and np.array_equal(self.outcome, other.outcome)
            and np.array_equal(self.group, other.group)
            and np.array_equal(self.row_id, other.row_id)
        )


def provenance(row_id: str) -> str:
    """Classify a row id as ``"real"``, ``"real-duplicate"`` or ``"smote"``."""
    if PROVENANCE_SEP not in row_id:
        return "real"
    tag = row_id.rsplit(PROVENANCE_SEP, 1)[1]
    if tag.startswith(SMOTE_TAG):
        return "smote"
    if tag.startswith(DUPLICATE_TAG):
        return "real-duplicate"
    return "real"


@dataclass(frozen=True)
class GroupConfig:
    """Reference/focal group roles for adverse-impact reporting."""

    reference_group: str = "White"
    focal_groups: tuple = ("Black", "Hispanic")
    aggregate_nonreference: bool = True
    aggregate_label: str = ""

    def __post_init__(self):
        focal = tuple(self.focal_groups)
        object.__setattr__(self, "focal_groups", focal)
        if self.reference_group in focal:
            raise ValidationError("reference group cannot also be a focal group")
        if len(set(focal)) != len(focal):
            raise ValidationError("focal groups must be distinct")
        if not self.aggregate_label:
            object.__setattr__(self, "aggregate_label", f"Non-{self.reference_group}")

    def report_labels(self) -> list[str]:
        """AI-ratio labels in reporting order: aggregate first, then focal groups."""
        labels = [self.aggregate_label] if self.aggregate_nonreference else []
        return labels + list(self.focal_groups)


@dataclass(frozen=True)
class CsvSchema:
    """Maps Dataset roles onto CSV column names.

    ``features=None`` takes every column not claimed by another role, in file
    order. ``id=None`` generates ids ``r1..rN``.
    """

    id: str | None = "id"
    group: str = "group"
    outcome: str = "outcome"
    features: Sequence[str] | None = None


def load_csv(path, schema: CsvSchema | None = None) -> Dataset:
    """Read a validated Dataset from a UTF-8, comma-delimited CSV file."""
    schema = schema or CsvSchema()
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyInputError(f"{path} is empty") from None
        rows = list(reader)

    header = [h.strip() for h in header]
    col = {name: j for j, name in enumerate(header)}
    required = [schema.group, schema.outcome] + ([schema.id] if schema.id else [])
    for name in required:
        if name not in col:
            raise SchemaError(f"column {name!r} not found in {path} (header: {header})")
    if schema.features is None:
        claimed = set(required)
        feat_cols = [h for h in header if h not in claimed]
    else:
        feat_cols = list(schema.features)
        for name in feat_cols:
            if name not in col:
                raise SchemaError(f"feature column {name!r} not found in {path}")
    if not feat_cols:
        raise SchemaError("no feature columns")
    rows = [r for r in rows if any(cell.strip() for cell in r)]
    if not rows:
        raise EmptyInputError(f"{path} has a header but no data rows")

    n = len(rows)
    X = np.empty((n, len(feat_cols)))
    y = np.empty(n, dtype=np.int8)
    groups, ids = [], []
    fidx = [col[c] for c in feat_cols]
    for i, row in enumerate(rows):
        rownum = i + 1
        if len(row) != len(header):
            raise ParseError(f"row {rownum}: expected {len(header)} fields, got {len(row)}", rownum)
        out = row[col[schema.outcome]].strip()
        if out not in ("0", "1"):
            raise ParseError(f"row {rownum}: outcome must be 0 or 1, got {out!r}", rownum)
        y[i] = int(out)
        label = row[col[schema.group]].strip()
        if not label:
            raise ParseError(f"row {rownum}: empty group label", rownum)
        groups.append(label)
        ids.append(row[col[schema.id]].strip() if schema.id else f"r{rownum}")
        for j, c in enumerate(fidx):
            text = row[c].strip()
            try:
                value = float(text)
            except ValueError:
                raise ParseError(
                    f"row {rownum}: feature {feat_cols[j]!r} is not numeric ({text!r})", rownum
                ) from None
            if not math.isfinite(value):
                raise ParseError(f"row {rownum}: feature {feat_cols[j]!r} is not finite", rownum)
            X[i, j] = value

    try:
        return Dataset(X, y, np.array(groups, dtype=object), np.array(ids, dtype=object), tuple(feat_cols))
    except ValidationError as exc:
        raise ParseError(str(exc)) from exc


def save_csv(d: Dataset, path) -> None:
    """Write ``d`` as ``id,group,outcome,<features>`` with 17 significant digits."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "group", "outcome", *d.feature_names])
        for i in range(d.n):
            w.writerow(
                [d.row_id[i], d.group[i], int(d.outcome[i])]
                + [format(v, ".17g") for v in d.features[i]]
            )


def group_cells(d: Dataset) -> dict[tuple[str, int], np.ndarray]:
    """Partition row indices by (group, outcome).

    Keys are sorted; only non-empty cells appear. Indices within a cell are
    ascending.
    """
    keys = list(zip(d.group.tolist(), d.outcome.tolist()))
    cells: dict[tuple[str, int], list[int]] = {}
    for i, key in enumerate(keys):
        cells.setdefault(key, []).append(i)
    return {k: np.asarray(cells[k], dtype=np.intp) for k in sorted(cells)}
