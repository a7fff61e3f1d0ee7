"""Experiment configuration read from YAML (or JSON) files."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from ..dataset import CsvSchema, GroupConfig
from ..errors import ConfigError, ValidationError
from ..resampler import PAPER_RATIOS, Strategy, Technique
from ..synthgen import PoolConfig, paper_pool_config


@dataclass(frozen=True)
class ExperimentConfig:
    ratios: tuple = PAPER_RATIOS
    strategies: tuple = (Strategy.SR_ONLY, Strategy.SR_AND_N)
    techniques: tuple = (Technique.BOOTSTRAP, Technique.SMOTE)
    classifiers: tuple = ("LOGISTIC", "LDA", "KNN", "DECISION_TREE")
    folds: int = 3
    inner_folds: int = 5
    overall_srs: tuple = (0.10, 0.50)
    master_seed: int = 0
    groups: GroupConfig = field(default_factory=GroupConfig)
    tune: bool = True
    smote_k: int = 5
    pad_reference_fails: bool = True
    pool: PoolConfig | None = None
    data_path: str | None = None
    schema: CsvSchema = field(default_factory=CsvSchema)
    resample: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("ratios", "strategies", "techniques", "classifiers", "overall_srs"):
            if not getattr(self, name):
                raise ConfigError(f"factor list {name!r} is empty")
        try:
            object.__setattr__(self, "strategies", tuple(Strategy(s) for s in self.strategies))
            object.__setattr__(self, "techniques", tuple(Technique(t) for t in self.techniques))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        ratios = tuple(float(r) for r in self.ratios)
        if any(r <= 0 for r in ratios):
            raise ConfigError("target AI ratios must be positive")
        object.__setattr__(self, "ratios", ratios)
        object.__setattr__(self, "classifiers", tuple(str(c) for c in self.classifiers))
        srs = tuple(float(s) for s in self.overall_srs)
        if any(not 0 < s <= 1 for s in srs):
            raise ConfigError("overall SRs must lie in (0, 1]")
        object.__setattr__(self, "overall_srs", srs)
        # a single fold is enough to enumerate a design; running one needs two
        if self.folds < 1 or self.inner_folds < 2:
            raise ConfigError("need folds >= 1 and inner_folds >= 2")


_TOP_KEYS = {
    "seed", "master_seed", "ratios", "strategies", "techniques", "classifiers", "folds",
    "inner_folds", "overall_srs", "groups", "tune", "smote_k", "pad_reference_fails",
    "pool", "data", "resample",
}


def _pool_from(spec) -> PoolConfig:
    if spec == "paper":
        return paper_pool_config()
    if not isinstance(spec, dict):
        raise ConfigError("pool must be 'paper' or a mapping")
    spec = dict(spec)
    preset = spec.pop("preset", None)
    if preset is not None:
        if preset != "paper":
            raise ConfigError(f"unknown pool preset {preset!r}")
        allowed = {"n_total", "seed", "mc_draws"}
        if set(spec) - allowed:
            raise ConfigError(f"preset pools accept only {sorted(allowed)}")
        return paper_pool_config(**spec)
    try:
        return PoolConfig(**spec)
    except TypeError as exc:
        raise ConfigError(f"bad pool section: {exc}") from None


def config_from_mapping(raw: dict) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a mapping")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    kw = {}
    for key in ("ratios", "strategies", "techniques", "classifiers", "overall_srs"):
        if key in raw:
            kw[key] = tuple(raw[key])
    for key in ("folds", "inner_folds", "smote_k"):
        if key in raw:
            kw[key] = int(raw[key])
    for key in ("tune", "pad_reference_fails"):
        if key in raw:
            kw[key] = bool(raw[key])
    if "seed" in raw or "master_seed" in raw:
        kw["master_seed"] = int(raw.get("master_seed", raw.get("seed")))
    try:
        if "groups" in raw:
            g = raw["groups"]
            kw["groups"] = GroupConfig(
                reference_group=g.get("reference", "White"),
                focal_groups=tuple(g.get("focal", ("Black", "Hispanic"))),
                aggregate_nonreference=bool(g.get("aggregate", True)),
                aggregate_label=g.get("aggregate_label", ""),
            )
        if "pool" in raw:
            kw["pool"] = _pool_from(raw["pool"])
    except ValidationError as exc:
        raise ConfigError(str(exc)) from None
    if "data" in raw:
        data = raw["data"]
        if isinstance(data, str):
            kw["data_path"] = data
        else:
            kw["data_path"] = data.get("path")
            if "schema" in data:
                kw["schema"] = CsvSchema(**data["schema"])
    if "resample" in raw:
        kw["resample"] = dict(raw["resample"])
    return ExperimentConfig(**kw)


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from None
    cfg = config_from_mapping(raw or {})
    if cfg.data_path and not Path(cfg.data_path).is_absolute():
        object.__setattr__(cfg, "data_path", str((path.parent / cfg.data_path).resolve()))
    return cfg
