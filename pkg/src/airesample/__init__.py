"""Adverse-impact-targeted resampling of training data and evaluation of
screening models trained on it."""

__version__ = "0.1.0"

from .dataset import CsvSchema, Dataset, GroupConfig, group_cells, load_csv, save_csv  # noqa: E402

__all__ = ["CsvSchema", "Dataset", "GroupConfig", "group_cells", "load_csv", "save_csv", "__version__"]
