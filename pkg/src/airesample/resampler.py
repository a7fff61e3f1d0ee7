"""Under/oversampling plans that move training-data AI ratios to a target.

Two strategies are supported:

* ``SR_ONLY`` adds or removes passing focal-group rows until each focal
  group's SR equals ``target_ai_ratio * SR_reference``.
* ``SR_AND_N`` additionally adds or removes failing focal-group rows so every
  focal group ends up with the reference group's N.

Rows are added by bootstrap duplication or by SMOTE.
"""

from __future__ import annotations

import csv
import enum
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .dataset import DUPLICATE_TAG, PROVENANCE_SEP, SMOTE_TAG, Dataset, GroupConfig, group_cells
from .errors import DomainError, InfeasibleError
from .smote import SmoteParams, smote_draws

RAW = "raw"
PAPER_RATIOS = (0.6, 0.8, 1.0, 1.2, 1.4)


class Strategy(str, enum.Enum):
    SR_ONLY = "SR_ONLY"
    SR_AND_N = "SR_AND_N"


class Technique(str, enum.Enum):
    BOOTSTRAP = "BOOTSTRAP"
    SMOTE = "SMOTE"


@dataclass(frozen=True)
class ResampleTarget:
    """One resampling condition; ``target_ai_ratio="raw"`` means no resampling."""

    target_ai_ratio: float | str = RAW
    strategy: Strategy | None = None
    technique: Technique | None = None

    def __post_init__(self):
        if self.is_raw:
            object.__setattr__(self, "target_ai_ratio", RAW)
            object.__setattr__(self, "strategy", None)
            object.__setattr__(self, "technique", None)
            return
        ratio = float(self.target_ai_ratio)
        if not (math.isfinite(ratio) and ratio > 0):
            raise DomainError(f"target AI ratio must be positive, got {self.target_ai_ratio}")
        object.__setattr__(self, "target_ai_ratio", ratio)
        if self.strategy is None or self.technique is None:
            raise DomainError("numeric targets need a strategy and a technique")
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        object.__setattr__(self, "technique", Technique(self.technique))

    @property
    def is_raw(self) -> bool:
        return isinstance(self.target_ai_ratio, str) and self.target_ai_ratio.lower() == RAW


@dataclass(frozen=True)
class PlanEntry:
    group: str
    outcome: int
    delta: int
    technique: Technique


@dataclass(frozen=True)
class ResamplePlan:
    entries: tuple = ()
    achieved: dict = field(default_factory=dict)

    def delta(self, group: str, outcome: int) -> int:
        return sum(e.delta for e in self.entries if e.group == group and e.outcome == outcome)

    def to_csv(self, path, cfg: GroupConfig | None = None) -> None:
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["group", "outcome", "delta", "technique", "achieved_ratio"])
            for e in self.entries:
                ratio = self.achieved.get(e.group)
                w.writerow(
                    [e.group, e.outcome, e.delta, e.technique.value, "" if ratio is None else repr(ratio)]
                )


def _check_counts(P, N):
    if N < 1 or not 0 <= P <= N:
        raise DomainError(f"need 0 <= P <= N and N >= 1, got P={P}, N={N}")


def _exact(t) -> Fraction:
    # the shortest decimal that round-trips, so 0.6 means 3/5
    return Fraction(repr(float(t)))


def _closest(candidates, sr_of, t):
    # exact rational comparison; ties go to the smaller count
    tf = _exact(t)
    return min(candidates, key=lambda c: (abs(sr_of(c) - tf), c))


def solve_pass_oversample(P: int, N: int, t: float) -> int:
    """Passes to add so that ``(P + x) / (N + x)`` is closest to ``t``.

    The real root ``(t*N - P) / (1 - t)`` is rounded down or up, whichever
    lands nearer the target (the smaller count on ties).
    """
    _check_counts(P, N)
    if t >= 1:
        raise InfeasibleError(f"target SR {t} >= 1 cannot be reached by adding passes")
    tf = _exact(t)
    cur = Fraction(P, N)
    if tf == cur:
        return 0
    if tf < cur:
        raise DomainError(f"target SR {t} is below the current SR {P}/{N}; undersample instead")
    root = (tf * N - P) / (1 - tf)
    cands = sorted({max(0, math.floor(root)), math.ceil(root)})
    return _closest(cands, lambda x: Fraction(P + x, N + x), t)


def solve_pass_undersample(P: int, N: int, t: float) -> int:
    """Passes to remove so that ``(P - y) / (N - y)`` is closest to ``t``.

    Raises
    ------
    InfeasibleError
        If the best count would remove every pass.
    """
    _check_counts(P, N)
    if t < 0:
        raise DomainError(f"target SR must be non-negative, got {t}")
    tf = _exact(t)
    cur = Fraction(P, N)
    if tf == cur:
        return 0
    if tf > cur:
        raise DomainError(f"target SR {t} is above the current SR {P}/{N}; oversample instead")
    root = (P - tf * N) / (1 - tf)
    cands = sorted({math.floor(root), math.ceil(root)})
    y = _closest(cands, lambda y: Fraction(P - y, N - y) if y < N else Fraction(-1), t)
    if y >= P:
        raise InfeasibleError(f"reaching SR {t} would remove all {P} passes")
    return y


def _group_counts(d: Dataset):
    counts = {}
    for label in d.groups():
        mask = d.group == label
        counts[label] = (int(d.outcome[mask].sum()), int(mask.sum()))
    return counts


def _reference_sr(counts, cfg):
    if cfg.reference_group not in counts:
        raise InfeasibleError(f"reference group {cfg.reference_group!r} absent from training data")
    P, N = counts[cfg.reference_group]
    if P == 0 or P == N:
        raise InfeasibleError(f"reference SR must lie strictly in (0, 1), got {P}/{N}")
    return P, N


def _present_focal(counts, cfg):
    out = []
    for g in cfg.focal_groups:
        if g in counts:
            out.append(g)
        else:
            warnings.warn(f"focal group {g!r} absent from training data; left unadjusted", stacklevel=3)
    return out


def _desired_sr(ratio, ref_sr, g):
    t = ratio * ref_sr
    if t >= 1:
        raise InfeasibleError(f"group {g!r}: target SR {t:.4f} >= 1 is unreachable")
    return t


def plan_sr_only(train: Dataset, cfg: GroupConfig, target: ResampleTarget) -> ResamplePlan:
    """Adjust passing focal rows only; group sizes change as a side effect."""
    if target.is_raw:
        return ResamplePlan()
    counts = _group_counts(train)
    P_r, N_r = _reference_sr(counts, cfg)
    ref_sr = P_r / N_r
    entries, achieved = [], {}
    for g in _present_focal(counts, cfg):
        P, N = counts[g]
        t = _desired_sr(target.target_ai_ratio, ref_sr, g)
        if _exact(t) > Fraction(P, N):
            x = solve_pass_oversample(P, N, t)
            if x and P == 0:
                raise InfeasibleError(f"group {g!r} has no passing rows to oversample")
            delta = x
        elif _exact(t) < Fraction(P, N):
            delta = -solve_pass_undersample(P, N, t)
        else:
            delta = 0
        if delta:
            entries.append(PlanEntry(g, 1, delta, target.technique))
        achieved[g] = ((P + delta) / (N + delta)) / ref_sr
    return ResamplePlan(tuple(entries), achieved)


def _round_half_up(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


def plan_equal_n(
    train: Dataset,
    cfg: GroupConfig,
    target: ResampleTarget,
    pad_reference_fails: bool = False,
) -> ResamplePlan:
    """Adjust passing and failing focal rows so each focal group matches the reference N.

    Each focal group is driven to ``round(t_g * N_ref)`` passes and
    ``N_ref - round(t_g * N_ref)`` fails, where ``t_g`` is the desired SR.

    With ``pad_reference_fails``, when some focal group has more failing rows
    than the reference group, the reference fail cell is first grown by the
    largest such excess (bootstrap duplicates); ``N_ref`` and the reference SR
    are taken after that padding.
    """
    if target.is_raw:
        return ResamplePlan()
    counts = _group_counts(train)
    P_r, N_r = _reference_sr(counts, cfg)
    focal = _present_focal(counts, cfg)
    entries = []
    if pad_reference_fails and focal:
        F_r = N_r - P_r
        excess = max((counts[g][1] - counts[g][0]) - F_r for g in focal)
        if excess > 0:
            entries.append(PlanEntry(cfg.reference_group, 0, excess, Technique.BOOTSTRAP))
            N_r += excess
    ref_sr = P_r / N_r
    n_star = N_r
    achieved = {}
    for g in focal:
        P, N = counts[g]
        F = N - P
        _desired_sr(target.target_ai_ratio, ref_sr, g)
        pass_target = _round_half_up(_exact(target.target_ai_ratio) * P_r)
        fail_target = n_star - pass_target
        if pass_target == 0:
            raise InfeasibleError(f"group {g!r}: target leaves no passing rows")
        if P == 0:
            raise InfeasibleError(f"group {g!r} has no passing rows to oversample")
        if fail_target == 0 and F > 0:
            raise InfeasibleError(f"group {g!r}: target would remove every failing row")
        if F == 0 and fail_target > 0:
            raise InfeasibleError(f"group {g!r} has no failing rows to oversample")
        for outcome, delta in ((1, pass_target - P), (0, fail_target - F)):
            if delta:
                entries.append(PlanEntry(g, outcome, delta, target.technique))
        achieved[g] = (pass_target / n_star) / ref_sr
    return ResamplePlan(tuple(entries), achieved)


def make_plan(
    train: Dataset, cfg: GroupConfig, target: ResampleTarget, pad_reference_fails: bool = False
) -> ResamplePlan:
    """Dispatch on ``target.strategy``."""
    if target.is_raw:
        return ResamplePlan()
    if target.strategy is Strategy.SR_ONLY:
        return plan_sr_only(train, cfg, target)
    return plan_equal_n(train, cfg, target, pad_reference_fails)


def apply_plan(train: Dataset, plan: ResamplePlan, seed: int, smote_k: int = 5) -> Dataset:
    """Materialize ``plan`` on ``train``.

    Removed rows are drawn uniformly without replacement. Added rows are
    appended after the surviving original rows, in plan order, with ids
    ``<source id>#dup<n>`` or ``<anchor id>#smote<n>``.
    """
    if not plan.entries:
        return train
    rng = np.random.default_rng(seed)
    cells = group_cells(train)
    keep = np.ones(train.n, dtype=bool)
    X_new, y_new, g_new, id_new = [], [], [], []
    serial = 0
    for e in plan.entries:
        rows = cells.get((e.group, e.outcome), np.empty(0, dtype=np.intp))
        if e.delta < 0:
            if -e.delta > len(rows) - 1:
                raise InfeasibleError(
                    f"cannot remove {-e.delta} of {len(rows)} rows from cell ({e.group}, {e.outcome})"
                )
            keep[rng.choice(rows, size=-e.delta, replace=False)] = False
            continue
        if e.delta == 0:
            continue
        if len(rows) == 0:
            raise InfeasibleError(f"cell ({e.group}, {e.outcome}) is empty; nothing to oversample")
        if e.technique is Technique.BOOTSTRAP:
            src = rng.choice(rows, size=e.delta, replace=True)
            feats = train.features[src]
            tag = DUPLICATE_TAG
        else:
            draws = smote_draws(
                train.features[rows], e.delta, SmoteParams(smote_k, int(rng.integers(2**63)))
            )
            src = rows[draws.anchors]
            feats = draws.rows
            tag = SMOTE_TAG
        X_new.append(feats)
        y_new.append(np.full(e.delta, e.outcome, dtype=np.int8))
        g_new.append(np.full(e.delta, e.group, dtype=object))
        for s in src:
            serial += 1
            id_new.append(f"{train.row_id[s]}{PROVENANCE_SEP}{tag}{serial}")
    kept = np.flatnonzero(keep)
    base = train.take(kept)
    if not X_new:
        return base
    return Dataset(
        np.vstack([base.features, *X_new]),
        np.concatenate([base.outcome, *y_new]),
        np.concatenate([base.group, *g_new]),
        np.concatenate([base.row_id, np.array(id_new, dtype=object)]),
        train.feature_names,
    )


def resample(
    train: Dataset,
    cfg: GroupConfig,
    target: ResampleTarget,
    seed: int,
    pad_reference_fails: bool = False,
    smote_k: int = 5,
) -> tuple[Dataset, ResamplePlan]:
    """Plan and apply in one step."""
    plan = make_plan(train, cfg, target, pad_reference_fails)
    return apply_plan(train, plan, seed, smote_k), plan
