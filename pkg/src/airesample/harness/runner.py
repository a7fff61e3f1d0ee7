"""Factorial sweep: enumerate cells, tune on raw folds, run and record each cell."""

from __future__ import annotations

import csv
import hashlib
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .. import classifiers as clf
from ..dataset import Dataset, GroupConfig
from ..errors import ConfigError, InfeasibleError, UndefinedRatioError
from ..metrics import accuracy, ai_ratios, selection_stats, threshold_at_sr
from ..resampler import RAW, ResampleTarget, apply_plan, make_plan
from ..splitter import FoldAssignment, stratified_kfold, train_test_views
from .config import ExperimentConfig

log = logging.getLogger(__name__)

NOT_APPLICABLE = "NA"


def derive_seed(*parts) -> int:
    """Stable 63-bit seed from any sequence of printable parts."""
    text = "|".join(str(p) for p in parts)
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big") >> 1


@dataclass(frozen=True)
class ExperimentCell:
    cell_id: int
    target: ResampleTarget
    classifier: str
    fold: int
    cell_seed: int

    @property
    def ratio_label(self) -> str:
        return RAW if self.target.is_raw else repr(self.target.target_ai_ratio)

    @property
    def strategy_label(self) -> str:
        return NOT_APPLICABLE if self.target.is_raw else self.target.strategy.value

    @property
    def technique_label(self) -> str:
        return NOT_APPLICABLE if self.target.is_raw else self.target.technique.value


@dataclass
class LevelResult:
    sr_level: float
    acc_overall: float | None = None
    acc_groups: dict = field(default_factory=dict)
    ai: dict = field(default_factory=dict)
    undefined: list = field(default_factory=list)


@dataclass
class ResultRecord:
    cell: ExperimentCell
    status: str = "ok"
    message: str = ""
    achieved: dict = field(default_factory=dict)
    levels: list = field(default_factory=list)

    @property
    def infeasible(self) -> bool:
        return self.status == "infeasible"


def enumerate_cells(config: ExperimentConfig) -> list[ExperimentCell]:
    """Raw controls first (classifier x fold), then ratio x strategy x technique x classifier x fold."""
    for name in ("ratios", "strategies", "techniques", "classifiers"):
        if not getattr(config, name):
            raise ConfigError(f"factor list {name!r} is empty")
    targets = [ResampleTarget()]
    for r in config.ratios:
        for s in config.strategies:
            for t in config.techniques:
                targets.append(ResampleTarget(r, s, t))
    cells = []
    for target in targets:
        for kind in config.classifiers:
            for fold in range(config.folds):
                seed = derive_seed(
                    config.master_seed,
                    target.target_ai_ratio,
                    target.strategy.value if target.strategy else NOT_APPLICABLE,
                    target.technique.value if target.technique else NOT_APPLICABLE,
                    kind,
                    fold,
                )
                cells.append(ExperimentCell(len(cells), target, kind, fold, seed))
    return cells


def tune_specs(dataset: Dataset, folds: FoldAssignment, config: ExperimentConfig) -> dict:
    """Tuned :class:`ClassifierSpec` per (classifier, fold), fitted on raw train views only."""
    specs = {}
    for kind in config.classifiers:
        for fold in range(config.folds):
            train, _ = train_test_views(dataset, folds, fold)
            seed = derive_seed(config.master_seed, "tune", kind, fold)
            fixed = {"seed": seed} if clf.Kind(kind) is clf.Kind.RANDOM_FOREST else None
            if config.tune:
                spec = clf.grid_tune(kind, train.features, train.outcome, None, config.inner_folds, seed, fixed)
            else:
                spec = clf.ClassifierSpec(kind, fixed or {})
            specs[(kind, fold)] = spec
    return specs


def _training_ratios(train: Dataset, groups: GroupConfig) -> dict:
    focal_only = GroupConfig(groups.reference_group, groups.focal_groups, aggregate_nonreference=False)
    try:
        stats = selection_stats(train.outcome, train.group)
        return dict(ai_ratios(stats, focal_only).ratios)
    except UndefinedRatioError:
        return {}


def _evaluate_level(probs, test: Dataset, sr: float, groups: GroupConfig) -> LevelResult:
    decisions = threshold_at_sr(probs, sr)
    res = LevelResult(sr)
    res.acc_overall = accuracy(decisions, test.outcome)
    for g in [groups.reference_group, *groups.focal_groups]:
        mask = test.group == g
        if mask.any():
            res.acc_groups[g] = accuracy(decisions, test.outcome, mask)
        else:
            res.undefined.append(f"acc_{g}")
    labels = groups.report_labels()
    try:
        ratios = ai_ratios(selection_stats(decisions, test.group), groups).ratios
    except UndefinedRatioError:
        ratios = {}
    for label in labels:
        if label in ratios:
            res.ai[label] = ratios[label]
        else:
            res.undefined.append(f"ai_{label}")
    return res


def run_cell(
    cell: ExperimentCell,
    dataset: Dataset,
    folds: FoldAssignment,
    tuned_specs: dict,
    config: ExperimentConfig,
) -> ResultRecord:
    """Resample the train view (unless raw), fit, score the test view at every overall SR."""
    record = ResultRecord(cell)
    train, test = train_test_views(dataset, folds, cell.fold)
    try:
        plan = make_plan(train, config.groups, cell.target, config.pad_reference_fails)
        train = apply_plan(train, plan, cell.cell_seed, config.smote_k)
    except InfeasibleError as exc:
        record.status = "infeasible"
        record.message = str(exc)
        return record
    record.achieved = _training_ratios(train, config.groups)
    model = clf.fit(tuned_specs[(cell.classifier, cell.fold)], train.features, train.outcome)
    probs = clf.predict_proba(model, test.features)
    record.levels = [_evaluate_level(probs, test, sr, config.groups) for sr in config.overall_srs]
    return record


# worker-process state, set once per process by _init_worker
_STATE = {}


def _init_worker(dataset, folds, specs, config):
    _STATE.update(dataset=dataset, folds=folds, specs=specs, config=config)


def _run_in_worker(cell):
    s = _STATE
    return run_cell(cell, s["dataset"], s["folds"], s["specs"], s["config"])


def run_sweep(dataset: Dataset, config: ExperimentConfig, jobs: int = 1, cells=None):
    """Run every cell; the returned records follow ``enumerate_cells`` order for any ``jobs``."""
    for kind in config.classifiers:
        try:
            clf.Kind(kind)
        except ValueError:
            raise ConfigError(f"unknown classifier {kind!r}") from None
    if config.folds < 2:
        raise ConfigError(f"a sweep needs at least 2 folds, got {config.folds}")
    cells = enumerate_cells(config) if cells is None else cells
    folds = stratified_kfold(dataset, config.folds, derive_seed(config.master_seed, "folds"))
    specs = tune_specs(dataset, folds, config)
    log.info("running %d cells with %d job(s)", len(cells), jobs)
    if jobs <= 1:
        records = [run_cell(c, dataset, folds, specs, config) for c in cells]
    else:
        with ProcessPoolExecutor(
            max_workers=jobs, initializer=_init_worker, initargs=(dataset, folds, specs, config)
        ) as pool:
            records = list(pool.map(_run_in_worker, cells, chunksize=max(1, len(cells) // (4 * jobs))))
    records.sort(key=lambda r: r.cell.cell_id)
    return records, folds, specs


def result_columns(groups: GroupConfig) -> list[str]:
    focal = list(groups.focal_groups)
    return (
        ["cell_id", "ratio_nominal", "strategy", "technique", "classifier", "fold"]
        + [f"achieved_ratio_{g}" for g in focal]
        + ["sr_level", "acc_overall", f"acc_{groups.reference_group}"]
        + [f"acc_{g}" for g in focal]
        + [f"ai_{label}" for label in groups.report_labels()]
        + ["undefined_flags"]
    )


def _num(x):
    return "" if x is None else repr(float(x))


def result_rows(records, groups: GroupConfig, overall_srs) -> list[list[str]]:
    """One row per (record, overall SR level), as strings."""
    rows = []
    focal = list(groups.focal_groups)
    for rec in records:
        c = rec.cell
        head = [str(c.cell_id), c.ratio_label, c.strategy_label, c.technique_label, c.classifier, str(c.fold)]
        achieved = [_num(rec.achieved.get(g)) for g in focal]
        if rec.infeasible:
            n_metrics = 2 + len(focal) + len(groups.report_labels())
            for sr in overall_srs:
                rows.append(head + achieved + [repr(float(sr))] + [""] * n_metrics + ["infeasible"])
            continue
        for lvl in rec.levels:
            flags = list(lvl.undefined)
            if any(rec.achieved.get(g) is None for g in focal):
                flags.append("achieved_ratio")
            rows.append(
                head
                + achieved
                + [repr(float(lvl.sr_level)), _num(lvl.acc_overall)]
                + [_num(lvl.acc_groups.get(g)) for g in [groups.reference_group, *focal]]
                + [_num(lvl.ai.get(label)) for label in groups.report_labels()]
                + [";".join(flags)]
            )
    return rows


def write_results_csv(records, path, config: ExperimentConfig) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(result_columns(config.groups))
        w.writerows(result_rows(records, config.groups, config.overall_srs))


def load_dataset(config: ExperimentConfig, data_path=None) -> Dataset:
    """Dataset from ``data_path`` / the config's data section, else a generated pool."""
    from ..dataset import load_csv
    from ..synthgen import generate_pool

    path = data_path or config.data_path
    if path:
        return load_csv(path, config.schema)
    if config.pool is None:
        raise ConfigError("no data: give --data, a data section, or a pool section")
    return generate_pool(config.pool)


def tuned_spec_table(specs: dict) -> list[dict]:
    return [
        {"classifier": kind, "fold": fold, "hyperparams": repr(spec.hyperparams)}
        for (kind, fold), spec in sorted(specs.items())
    ]

