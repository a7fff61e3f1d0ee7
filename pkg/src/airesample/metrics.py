"""Selection ratios, adverse-impact ratios, top-k thresholding and accuracy."""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal

import numpy as np

from .dataset import GroupConfig
from .errors import DomainError, EmptyInputError, UndefinedAccuracyError, UndefinedRatioError

FOUR_FIFTHS = 0.8


@dataclass(frozen=True)
class GroupSR:
    n: int
    passes: int

    @property
    def sr(self) -> float:
        return self.passes / self.n


@dataclass(frozen=True)
class SelectionStats:
    per_group: dict
    overall_sr: float

    @property
    def n(self) -> int:
        return sum(g.n for g in self.per_group.values())

    @property
    def passes(self) -> int:
        return sum(g.passes for g in self.per_group.values())

    def sr(self, group: str) -> float:
        return self.per_group[group].sr


@dataclass(frozen=True)
class AiRatioSet:
    reference: str
    ratios: dict = field(default_factory=dict)
    overall_sr_context: float = float("nan")


class FourFifths(enum.Enum):
    PASS = "pass"
    VIOLATE = "violate"


def _binary_vector(values, name):
    v = np.asarray(values)
    if v.ndim != 1:
        raise DomainError(f"{name} must be one-dimensional")
    if v.size and not np.all((v == 0) | (v == 1)):
        raise DomainError(f"{name} must contain only 0 and 1")
    return v.astype(np.int64)


def selection_stats(decisions, groups) -> SelectionStats:
    """Per-group pass counts and selection ratios."""
    d = _binary_vector(decisions, "decisions")
    g = np.asarray(groups, dtype=object)
    if len(d) != len(g):
        raise DomainError(f"decisions ({len(d)}) and groups ({len(g)}) differ in length")
    if len(d) == 0:
        raise EmptyInputError("no decisions")
    per_group = {}
    for label in dict.fromkeys(g.tolist()):
        mask = g == label
        per_group[label] = GroupSR(int(mask.sum()), int(d[mask].sum()))
    return SelectionStats(per_group, int(d.sum()) / len(d))


def ai_ratios(stats: SelectionStats, cfg: GroupConfig) -> AiRatioSet:
    """Focal-group SR divided by reference-group SR.

    The aggregate entry pools every non-reference group present in ``stats``.
    Focal groups missing from ``stats`` are dropped with a warning.

    Raises
    ------
    UndefinedRatioError
        If the reference group is absent or selects nobody.
    """
    ref = stats.per_group.get(cfg.reference_group)
    if ref is None or ref.n == 0:
        raise UndefinedRatioError(f"reference group {cfg.reference_group!r} has no rows")
    if ref.passes == 0:
        raise UndefinedRatioError(f"reference group {cfg.reference_group!r} has SR = 0")
    ref_sr = ref.sr
    ratios = {}
    if cfg.aggregate_nonreference:
        others = [s for label, s in stats.per_group.items() if label != cfg.reference_group]
        n_other = sum(s.n for s in others)
        if n_other:
            ratios[cfg.aggregate_label] = (sum(s.passes for s in others) / n_other) / ref_sr
        else:
            warnings.warn("no non-reference rows; aggregate ratio omitted", stacklevel=2)
    for label in cfg.focal_groups:
        s = stats.per_group.get(label)
        if s is None or s.n == 0:
            warnings.warn(f"focal group {label!r} absent; ratio omitted", stacklevel=2)
            continue
        ratios[label] = s.sr / ref_sr
    return AiRatioSet(cfg.reference_group, ratios, stats.overall_sr)


def four_fifths_check(ratio: float) -> FourFifths:
    """VIOLATE when ``ratio < 0.8``; the boundary itself passes."""
    if not math.isfinite(ratio) or ratio < 0:
        raise DomainError(f"AI ratio must be finite and non-negative, got {ratio}")
    return FourFifths.VIOLATE if ratio < FOUR_FIFTHS else FourFifths.PASS


def binary_sd(n: int, p: float) -> float:
    """``(n * p * (1 - p)) ** 0.5`` for a 0/1 variable with mean ``p`` over ``n`` rows.

    This is the standard deviation of the count of passes, not of a single
    binary observation (that would be ``(p * (1 - p)) ** 0.5``).
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    if not 0.0 <= p <= 1.0:
        raise DomainError("p must lie in [0, 1]")
    return (n * p * (1.0 - p)) ** 0.5


def selection_count(target_sr: float, n: int) -> int:
    """``round(target_sr * n)`` with halves rounded away from zero.

    The product is formed in decimal so that e.g. ``0.1 * 835`` is exactly 83.5.
    """
    k = (Decimal(repr(float(target_sr))) * n).quantize(Decimal(1), rounding=ROUND_HALF_UP)
    return int(k)


def threshold_at_sr(probs, target_sr: float) -> np.ndarray:
    """Pass the ``k`` rows with the largest probabilities.

    ``k = selection_count(target_sr, N)``. Equal probabilities are ranked by
    ascending row index, so the output is reproducible.
    """
    pr = np.asarray(probs, dtype=np.float64)
    if pr.ndim != 1:
        raise DomainError("probs must be one-dimensional")
    if pr.size == 0:
        raise EmptyInputError("no probabilities to threshold")
    if not np.all(np.isfinite(pr)) or pr.min() < 0 or pr.max() > 1:
        raise DomainError("probabilities must be finite and within [0, 1]")
    if not 0 < target_sr <= 1:
        raise DomainError(f"target_sr must lie in (0, 1], got {target_sr}")
    k = selection_count(target_sr, pr.size)
    order = np.lexsort((np.arange(pr.size), -pr))
    decisions = np.zeros(pr.size, dtype=np.int8)
    decisions[order[:k]] = 1
    return decisions


def accuracy(decisions, truth, mask=None) -> float:
    """Share of rows (within ``mask`` if given) where decision equals truth.

    ``mask`` may be a boolean vector or an index array.
    """
    d = _binary_vector(decisions, "decisions")
    t = _binary_vector(truth, "truth")
    if len(d) != len(t):
        raise DomainError("decisions and truth differ in length")
    if mask is None:
        sel = np.arange(len(d))
    else:
        m = np.asarray(mask)
        if m.dtype == bool:
            if len(m) != len(d):
                raise DomainError("boolean mask length differs from decisions")
            sel = np.flatnonzero(m)
        else:
            sel = m.astype(np.intp)
            if sel.size and (sel.min() < 0 or sel.max() >= len(d)):
                raise DomainError("mask index out of range")
    if sel.size == 0:
        raise UndefinedAccuracyError("accuracy over an empty row set")
    return float(np.mean(d[sel] == t[sel]))


def group_accuracies(decisions, truth, groups, labels) -> dict:
    """Accuracy per group label; groups with no rows map to None."""
    g = np.asarray(groups, dtype=object)
    out = {}
    for label in labels:
        mask = g == label
        out[label] = accuracy(decisions, truth, mask) if mask.any() else None
    return out
