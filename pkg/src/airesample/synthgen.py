"""Seeded synthetic applicant pools with group-specific predictor shifts and pass rates."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .classifiers._base import sigmoid
from .dataset import Dataset
from .errors import CalibrationError, ConfigError, InfeasibleError


@dataclass(frozen=True)
class PoolConfig:
    """Generator settings.

    Features of a row in group ``g`` are ``group_mean_shift[g] + noise_sd * Z``
    with ``Z`` standard normal; its outcome is Bernoulli with probability
    ``sigmoid(outcome_coefs @ x + intercept_g)``. Supply either
    ``group_intercepts`` or ``target_srs`` (intercepts are then calibrated).
    """

    n_total: int
    group_mix: dict
    p: int
    outcome_coefs: tuple
    group_mean_shift: dict = field(default_factory=dict)
    noise_sd: float = 1.0
    group_intercepts: dict | None = None
    target_srs: dict | None = None
    seed: int = 0
    mc_draws: int = 20000

    def __post_init__(self):
        if self.n_total < 1:
            raise ConfigError("n_total must be positive")
        if self.p < 1:
            raise ConfigError("p must be positive")
        mix = dict(self.group_mix)
        if not mix:
            raise ConfigError("group_mix is empty")
        if any(not 0 < v <= 1 for v in mix.values()):
            raise ConfigError("group proportions must lie in (0, 1]")
        if abs(sum(mix.values()) - 1.0) > 1e-9:
            raise ConfigError(f"group proportions sum to {sum(mix.values())}, not 1")
        if not self.noise_sd > 0:
            raise ConfigError("noise_sd must be positive")
        coefs = tuple(float(c) for c in self.outcome_coefs)
        if len(coefs) != self.p:
            raise ConfigError(f"{len(coefs)} outcome coefficients for p = {self.p}")
        shifts = {}
        for g in mix:
            s = np.zeros(self.p) if g not in self.group_mean_shift else np.asarray(
                self.group_mean_shift[g], dtype=np.float64
            )
            if s.shape != (self.p,):
                raise ConfigError(f"mean shift for {g!r} must have {self.p} entries")
            shifts[g] = tuple(s.tolist())
        extra = set(self.group_mean_shift) - set(mix)
        if extra:
            raise ConfigError(f"mean shifts for undeclared groups {sorted(extra)}")
        if self.group_intercepts is None and self.target_srs is None:
            raise ConfigError("give group_intercepts or target_srs")
        for name in ("group_intercepts", "target_srs"):
            values = getattr(self, name)
            if values is not None and set(values) != set(mix):
                raise ConfigError(f"{name} must cover exactly the groups in group_mix")
        if self.target_srs is not None and any(not 0 < v < 1 for v in self.target_srs.values()):
            raise ConfigError("target SRs must lie in (0, 1)")
        object.__setattr__(self, "group_mix", mix)
        object.__setattr__(self, "outcome_coefs", coefs)
        object.__setattr__(self, "group_mean_shift", shifts)


def apportion(n_total: int, mix: dict) -> dict:
    """Largest-remainder apportionment of ``n_total`` rows; ties go to earlier groups."""
    quotas = {g: n_total * w for g, w in mix.items()}
    counts = {g: math.floor(q) for g, q in quotas.items()}
    left = n_total - sum(counts.values())
    order = sorted(mix, key=lambda g: -(quotas[g] - counts[g]))
    for g in order[:left]:
        counts[g] += 1
    empty = [g for g, c in counts.items() if c == 0]
    if empty:
        raise InfeasibleError(f"n_total = {n_total} leaves groups {empty} with no rows")
    return counts


def _expected_sr(base, intercept):
    return float(sigmoid(base + intercept).mean())


def calibrate_intercepts(cfg: PoolConfig, tol: float = 0.005) -> dict:
    """Per-group intercept whose expected SR matches ``cfg.target_srs``.

    The expected SR is a Monte Carlo average over ``cfg.mc_draws`` fixed draws
    of the group's features, so it is a smooth increasing function of the
    intercept; bisection runs to machine-level bracket width.
    """
    if cfg.target_srs is None:
        raise ConfigError("calibration needs target_srs")
    rng = np.random.default_rng([cfg.seed, 0xC0FFEE])
    coefs = np.asarray(cfg.outcome_coefs)
    out = {}
    for g in cfg.group_mix:
        target = cfg.target_srs[g]
        Z = rng.standard_normal((cfg.mc_draws, cfg.p))
        base = (np.asarray(cfg.group_mean_shift[g]) + cfg.noise_sd * Z) @ coefs
        lo, hi = -5.0, 5.0
        while not (_expected_sr(base, lo) <= target <= _expected_sr(base, hi)):
            if hi >= 20.0:
                raise CalibrationError(f"group {g!r}: SR {target} not bracketed within +-20")
            lo, hi = max(2 * lo, -20.0), min(2 * hi, 20.0)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                break
            if _expected_sr(base, mid) < target:
                lo = mid
            else:
                hi = mid
        b = 0.5 * (lo + hi)
        if abs(_expected_sr(base, b) - target) > tol:
            raise CalibrationError(f"group {g!r}: calibration missed SR {target}")
        out[g] = b
    return out


def generate_pool(cfg: PoolConfig) -> Dataset:
    """Draw a pool per ``cfg``; identical configs give identical Datasets."""
    intercepts = cfg.group_intercepts
    if intercepts is None:
        intercepts = calibrate_intercepts(cfg)
    counts = apportion(cfg.n_total, cfg.group_mix)
    rng = np.random.default_rng(cfg.seed)
    coefs = np.asarray(cfg.outcome_coefs)
    X_parts, y_parts, g_parts = [], [], []
    for g, n_g in counts.items():
        X = np.asarray(cfg.group_mean_shift[g]) + cfg.noise_sd * rng.standard_normal((n_g, cfg.p))
        prob = sigmoid(X @ coefs + intercepts[g])
        X_parts.append(X)
        y_parts.append((rng.random(n_g) < prob).astype(np.int8))
        g_parts.append(np.full(n_g, g, dtype=object))
    order = rng.permutation(cfg.n_total)
    width = len(str(cfg.n_total))
    ids = np.array([f"a{i + 1:0{width}d}" for i in range(cfg.n_total)], dtype=object)
    return Dataset(
        np.vstack(X_parts)[order],
        np.concatenate(y_parts)[order],
        np.concatenate(g_parts)[order],
        ids,
    )


# Group mix and SRs follow the applicant pool in the source study (overall
# SR about .494; White .60, Black .46, Hispanic .37). The "Other" share and SR
# are chosen so the pooled non-White SR lands near .43.
PAPER_MIX = {"White": 0.38, "Black": 0.30, "Hispanic": 0.20, "Other": 0.12}
PAPER_SRS = {"White": 0.60, "Black": 0.46, "Hispanic": 0.37, "Other": 0.45}


def paper_pool_config(n_total: int = 2501, seed: int = 0, mc_draws: int = 20000) -> PoolConfig:
    """Pool shaped like the study's applicants, with predictor shifts that
    let trained models pick up the group differences."""
    return PoolConfig(
        n_total=n_total,
        group_mix=PAPER_MIX,
        p=4,
        outcome_coefs=(0.9, 0.7, 0.5, 0.3),
        group_mean_shift={
            "White": (0.0, 0.0, 0.0, 0.0),
            "Black": (-0.35, -0.30, -0.20, 0.0),
            "Hispanic": (-0.55, -0.45, -0.35, -0.10),
            "Other": (-0.35, -0.25, -0.15, 0.0),
        },
        noise_sd=1.0,
        target_srs=PAPER_SRS,
        seed=seed,
        mc_draws=mc_draws,
    )
