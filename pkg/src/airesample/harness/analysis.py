"""Condition means, condition-factor correlations and accuracy/AI tradeoff tables."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd

from ..errors import DomainError
from ..resampler import RAW, Strategy, Technique

KEY_COLUMNS = ["cell_id", "ratio_nominal", "strategy", "technique", "classifier", "fold"]


def load_results(path) -> pd.DataFrame:
    """Read a results CSV; empty metric fields become NaN."""
    df = pd.read_csv(
        path,
        dtype={"ratio_nominal": str, "strategy": str, "technique": str, "classifier": str},
        keep_default_na=False,
    )
    return normalize(df)


def results_frame(records, config) -> pd.DataFrame:
    """In-memory equivalent of :func:`load_results` on a freshly written CSV."""
    from .runner import result_columns, result_rows

    rows = result_rows(records, config.groups, config.overall_srs)
    return normalize(pd.DataFrame(rows, columns=result_columns(config.groups)))


def normalize(df: pd.DataFrame) -> pd.DataFrame:
    df = df.copy()
    for col in ("ratio_nominal", "strategy", "technique", "classifier"):
        df[col] = df[col].astype(str)
    df["undefined_flags"] = df["undefined_flags"].fillna("").astype(str)
    for col in metric_columns(df) + ["sr_level"] + [c for c in df if c.startswith("achieved_ratio_")]:
        df[col] = pd.to_numeric(df[col].where(df[col] != "", np.nan))
    return df


def metric_columns(df: pd.DataFrame) -> list[str]:
    return [c for c in df.columns if c.startswith("acc_") or c.startswith("ai_")]


def ai_columns(df: pd.DataFrame) -> list[str]:
    return [c for c in df.columns if c.startswith("ai_")]


def _is_infeasible(df):
    return df["undefined_flags"].str.split(";").apply(lambda flags: "infeasible" in flags)


def _ratio_sort_key(label):
    return -1.0 if label == RAW else float(label)


def _summarize(block: pd.DataFrame, value_cols) -> dict:
    infeasible = _is_infeasible(block)
    ok = block[~infeasible]
    row = {
        "n_records": int(len(block)),
        "n_infeasible": int(infeasible.sum()),
        "n_undefined_ai": int(ok[ai_columns(block)].isna().any(axis=1).sum()),
    }
    for col in value_cols:
        row[col] = ok[col].mean() if ok[col].notna().any() else np.nan
    return row


def aggregate(df: pd.DataFrame, by=()) -> pd.DataFrame:
    """Mean of every metric by SR level and training ratio.

    Each non-raw ratio gets an ``All`` row plus one row per strategy and per
    technique. Raw controls form a single ``Raw`` row. Undefined values are
    left out of the means; ``n_infeasible`` and ``n_undefined_ai`` count the
    records affected. ``by`` adds grouping columns such as ``["classifier"]``.
    """
    if df.empty:
        raise DomainError("no results to aggregate")
    by = list(by)
    values = [c for c in df.columns if c.startswith("achieved_ratio_")] + metric_columns(df)
    rows = []
    group_keys = ["sr_level", *by]
    for keys, block in df.groupby(group_keys, sort=True):
        keys = keys if isinstance(keys, tuple) else (keys,)
        base = dict(zip(group_keys, keys))
        for ratio in sorted(block["ratio_nominal"].unique(), key=_ratio_sort_key):
            rb = block[block["ratio_nominal"] == ratio]
            if ratio == RAW:
                rows.append({**base, "ratio_nominal": ratio, "condition": "Raw", **_summarize(rb, values)})
                continue
            rows.append({**base, "ratio_nominal": ratio, "condition": "All", **_summarize(rb, values)})
            for col, levels in (("strategy", Strategy), ("technique", Technique)):
                for level in levels:
                    sub = rb[rb[col] == level.value]
                    if len(sub):
                        rows.append(
                            {**base, "ratio_nominal": ratio, "condition": level.value, **_summarize(sub, values)}
                        )
    return pd.DataFrame(rows)


def pearson(x, y) -> float:
    """Pearson correlation over pairs where both values are finite; NaN if either side is constant."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    ok = np.isfinite(x) & np.isfinite(y)
    x, y = x[ok], y[ok]
    if len(x) < 2:
        return float("nan")
    dx, dy = x - x.mean(), y - y.mean()
    sxx, syy = np.dot(dx, dx), np.dot(dy, dy)
    if sxx == 0 or syy == 0:
        return float("nan")
    return float(np.dot(dx, dy) / np.sqrt(sxx * syy))


FACTORS = ("training_ai_ratio", "sr_and_n", "synthetic")


def condition_correlations(df: pd.DataFrame) -> pd.DataFrame:
    """Correlation of coded condition factors with each test AI-ratio column.

    Factors: nominal training ratio; strategy (SR_ONLY = 0, SR_AND_N = 1);
    technique (BOOTSTRAP = 0, SMOTE = 1). Raw and infeasible records are
    excluded. One row per (SR level, factor).
    """
    sub = df[(df["ratio_nominal"] != RAW) & ~_is_infeasible(df)]
    if len(sub) < 3:
        raise DomainError("need at least 3 non-raw records to correlate")
    cols = ai_columns(df)
    rows = []
    for sr, block in sub.groupby("sr_level", sort=True):
        coded = {
            "training_ai_ratio": block["ratio_nominal"].astype(float).to_numpy(),
            "sr_and_n": (block["strategy"] == Strategy.SR_AND_N.value).astype(float).to_numpy(),
            "synthetic": (block["technique"] == Technique.SMOTE.value).astype(float).to_numpy(),
        }
        for factor in FACTORS:
            row = {"sr_level": sr, "factor": factor, "n": int(len(block))}
            for col in cols:
                row[col] = pearson(coded[factor], block[col].to_numpy())
            rows.append(row)
    return pd.DataFrame(rows)


def emit_tradeoff(df: pd.DataFrame, sr_level: float = 0.5) -> pd.DataFrame:
    """Mean overall accuracy and mean AI ratios per (classifier, training ratio) at one SR level.

    Rows are ordered by classifier, then raw first and ascending ratio.
    """
    block = df[np.isclose(df["sr_level"], sr_level) & ~_is_infeasible(df)]
    if block.empty:
        raise DomainError(f"no feasible results at SR level {sr_level}")
    cols = ["acc_overall", *ai_columns(df)]
    rows = []
    for kind in sorted(block["classifier"].unique()):
        kb = block[block["classifier"] == kind]
        for ratio in sorted(kb["ratio_nominal"].unique(), key=_ratio_sort_key):
            rb = kb[kb["ratio_nominal"] == ratio]
            rows.append(
                {"classifier": kind, "ratio_nominal": ratio, "n": int(len(rb)), **{c: rb[c].mean() for c in cols}}
            )
    return pd.DataFrame(rows)


def tradeoff_plot(table: pd.DataFrame, path, ai_column: str | None = None) -> None:
    """Scatter of mean accuracy against a mean AI ratio, points labelled by training ratio."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ai_column = ai_column or [c for c in table.columns if c.startswith("ai_")][0]
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for kind, kb in table.groupby("classifier", sort=True):
        ax.plot(kb[ai_column], kb["acc_overall"], marker="o", label=kind)
        for _, r in kb.iterrows():
            ax.annotate(r["ratio_nominal"], (r[ai_column], r["acc_overall"]), fontsize=7,
                        xytext=(3, 3), textcoords="offset points")
    ax.set_xlabel(f"mean test {ai_column.removeprefix('ai_')} AI ratio")
    ax.set_ylabel("mean overall accuracy")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(Path(path), format="svg", metadata={"Date": None})
    plt.close(fig)
