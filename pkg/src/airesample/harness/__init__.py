"""Factorial experiment runner, result analytics and the command-line interface."""

from .analysis import aggregate, condition_correlations, emit_tradeoff, load_results, results_frame
from .config import ExperimentConfig, config_from_mapping, load_config
from .runner import (
    ExperimentCell,
    ResultRecord,
    derive_seed,
    enumerate_cells,
    run_cell,
    run_sweep,
    tune_specs,
    write_results_csv,
)

__all__ = [
    "ExperimentCell",
    "ExperimentConfig",
    "ResultRecord",
    "aggregate",
    "condition_correlations",
    "config_from_mapping",
    "derive_seed",
    "emit_tradeoff",
    "enumerate_cells",
    "load_config",
    "load_results",
    "results_frame",
    "run_cell",
    "run_sweep",
    "tune_specs",
    "write_results_csv",
]
