"""Batch command-line interface.

Exit codes: 0 success, 2 config error, 3 data error, 4 every resampled cell infeasible.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .. import _ext
from ..dataset import save_csv
from ..errors import (
    ConfigError,
    EmptyInputError,
    InfeasibleError,
    ParseError,
    SchemaError,
    ValidationError,
)
from ..resampler import ResampleTarget, resample
from ..splitter import stratified_kfold
from ..synthgen import generate_pool
from . import analysis
from .config import ExperimentConfig, load_config
from .runner import derive_seed, load_dataset, run_sweep, tuned_spec_table, write_results_csv

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_INFEASIBLE = 0, 2, 3, 4

log = logging.getLogger("airesample")


def _config(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    if args.seed is not None:
        cfg = replace(cfg, master_seed=args.seed)
        if cfg.pool is not None:
            cfg = replace(cfg, pool=replace(cfg.pool, seed=args.seed))
    return cfg


def _out(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _results_path(args) -> Path:
    return Path(args.results) if args.results else Path(args.out) / "results.csv"


def cmd_generate(args):
    cfg = _config(args)
    if cfg.pool is None:
        raise ConfigError("generate needs a pool section in --config")
    path = _out(args) / "pool.csv"
    save_csv(generate_pool(cfg.pool), path)
    print(path)


def cmd_split(args):
    cfg = _config(args)
    d = load_dataset(cfg, args.data)
    folds = stratified_kfold(d, cfg.folds, derive_seed(cfg.master_seed, "folds"))
    path = _out(args) / "folds.csv"
    folds.to_csv(d, path)
    print(path)


def cmd_resample(args):
    cfg = _config(args)
    d = load_dataset(cfg, args.data)
    spec = dict(cfg.resample)
    for key in ("ratio", "strategy", "technique"):
        if getattr(args, key) is not None:
            spec[key] = getattr(args, key)
    if "ratio" not in spec:
        raise ConfigError("resample needs a target ratio (--ratio or resample.ratio)")
    try:
        target = ResampleTarget(spec["ratio"], spec.get("strategy", "SR_ONLY"), spec.get("technique", "BOOTSTRAP"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    seed = derive_seed(cfg.master_seed, "resample")
    out_d, plan = resample(d, cfg.groups, target, seed, cfg.pad_reference_fails, cfg.smote_k)
    out = _out(args)
    save_csv(out_d, out / "resampled.csv")
    plan.to_csv(out / "plan.csv")
    print(out / "resampled.csv")


def cmd_run(args):
    cfg = _config(args)
    d = load_dataset(cfg, args.data)
    records, _, specs = run_sweep(d, cfg, jobs=args.jobs)
    out = _out(args)
    write_results_csv(records, out / "results.csv", cfg)
    with (out / "tuned_specs.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, ["classifier", "fold", "hyperparams"], lineterminator="\n")
        w.writeheader()
        w.writerows(tuned_spec_table(specs))
    n_bad = sum(r.infeasible for r in records)
    log.info("%d cells, %d infeasible", len(records), n_bad)
    print(out / "results.csv")
    # raw controls always run, so the design counts as infeasible when every resampled cell is
    resampled = [r for r in records if not r.cell.target.is_raw]
    if resampled and all(r.infeasible for r in resampled):
        print("infeasible: every resampled cell is infeasible", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def _write_table(df, path):
    df.to_csv(path, index=False, float_format="%.6f", lineterminator="\n")
    print(path)


def cmd_aggregate(args):
    df = analysis.load_results(_results_path(args))
    by = ["classifier"] if args.by_classifier else []
    _write_table(analysis.aggregate(df, by), _out(args) / "aggregate.csv")


def cmd_correlate(args):
    df = analysis.load_results(_results_path(args))
    _write_table(analysis.condition_correlations(df), _out(args) / "correlations.csv")


def cmd_tradeoff(args):
    df = analysis.load_results(_results_path(args))
    table = analysis.emit_tradeoff(df, args.sr_level)
    out = _out(args)
    _write_table(table, out / "tradeoff.csv")
    if args.svg:
        analysis.tradeoff_plot(table, out / "tradeoff.svg")
        print(out / "tradeoff.svg")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML/JSON experiment config")
    common.add_argument("--data", help="applicant CSV (id,group,outcome,features...)")
    common.add_argument("--out", default="out", help="output directory (default: out)")
    common.add_argument("--seed", type=int, help="master seed (overrides the config)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for run")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="airesample",
        description="Resample training data to target adverse-impact ratios and measure model outcomes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("generate", parents=[common], help="synthetic pool from config -> pool.csv")
    sub.add_parser("split", parents=[common], help="stratified folds -> folds.csv")
    p = sub.add_parser("resample", parents=[common], help="plan + apply one target -> resampled.csv, plan.csv")
    p.add_argument("--ratio", type=float)
    p.add_argument("--strategy", choices=["SR_ONLY", "SR_AND_N"])
    p.add_argument("--technique", choices=["BOOTSTRAP", "SMOTE"])
    sub.add_parser("run", parents=[common], help="full factorial sweep -> results.csv")
    for name, text in (
        ("aggregate", "condition means -> aggregate.csv"),
        ("correlate", "condition correlations -> correlations.csv"),
        ("tradeoff", "accuracy vs AI ratio per classifier -> tradeoff.csv"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--results", help="results CSV (default: <out>/results.csv)")
        if name == "aggregate":
            p.add_argument("--by-classifier", action="store_true")
        if name == "tradeoff":
            p.add_argument("--sr-level", type=float, default=0.5)
            p.add_argument("--svg", action="store_true", help="also write tradeoff.svg")
    return parser


COMMANDS = {
    "generate": cmd_generate,
    "split": cmd_split,
    "resample": cmd_resample,
    "run": cmd_run,
    "aggregate": cmd_aggregate,
    "correlate": cmd_correlate,
    "tradeoff": cmd_tradeoff,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    log.debug("kernel backend: %s", _ext.BACKEND)
    try:
        return COMMANDS[args.command](args) or EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SchemaError, ParseError, EmptyInputError, ValidationError, FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
