"""Seeded synthetic streams for the four drift shapes.

Every random draw is made up front, in the same order, whatever the
schedule kind, so the pre-drift segment of a stream is bitwise identical
across kinds for a given seed; only the post-drift concept weights differ.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import ConfigError
from .base import Stream, StreamMeta

KINDS = ("sudden", "gradual", "incremental", "reoccurring")


@dataclass(frozen=True)
class DriftSchedule:
    kind: str = "sudden"
    drift_at: int = 2000
    drift_end: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown drift kind {self.kind!r}; expected one of {KINDS}")
        if self.drift_at < 1:
            raise ConfigError("drift_at must be a positive index")
        if self.kind != "sudden" and self.drift_end is None:
            raise ConfigError(f"{self.kind} drift needs drift_end")
        if self.drift_end is not None and self.drift_end <= self.drift_at:
            raise ConfigError("drift_end must be greater than drift_at")

    def new_concept_weight(self, n: int) -> np.ndarray:
        """Probability (gradual) or mixing fraction (incremental) of the new concept."""
        t = np.arange(n, dtype=float)
        if self.kind == "sudden":
            return (t >= self.drift_at).astype(float)
        if self.kind == "reoccurring":
            return ((t >= self.drift_at) & (t < self.drift_end)).astype(float)
        return np.clip((t - self.drift_at) / (self.drift_end - self.drift_at), 0.0, 1.0)

    @property
    def drift_points(self) -> list[int]:
        return [self.drift_at]


def _concept(schedule: DriftSchedule, n: int, u: np.ndarray) -> np.ndarray:
    w = schedule.new_concept_weight(n)
    if schedule.kind == "gradual":
        return (u < w).astype(float)
    return w


# ---------------------------------------------------------------- gaussian


@dataclass(frozen=True)
class GaussianStreamConfig:
    """Gaussian-mixture stream; the drift moves one cluster's mean.

    Cluster 0 sits at ``0.5`` in every coordinate; cluster ``c >= 1`` sits
    at ``0.5 + shift`` except coordinate ``c - 1``, lowered by ``5 * shift``.
    After the drift, cluster ``drift_cluster`` moves to ``0.5 + shift``
    everywhere.  The moved cluster is then nearer its old mean in L1 but
    nearer cluster 0 in L2, so stale autoencoders mislabel it while a
    nearest-centroid label mapping still recovers it.
    """

    dim: int = 8
    n_clusters: int = 2
    n_train: int = 1000
    n_test: int = 5000
    std: float = 0.02
    shift: float = 0.08
    drift_cluster: int = 1
    old_means: Optional[tuple] = None
    new_means: Optional[tuple] = None

    def __post_init__(self):
        if self.old_means is None and not 1 <= self.drift_cluster < self.n_clusters:
            raise ConfigError("drift_cluster must be in [1, n_clusters) for the built-in geometry")
        if self.old_means is None and self.n_clusters - 1 > self.dim:
            raise ConfigError("built-in geometry needs n_clusters - 1 <= dim")

    def means(self) -> tuple[np.ndarray, np.ndarray]:
        D, C, b = self.dim, self.n_clusters, self.shift
        if self.old_means is not None:
            old = np.asarray(self.old_means, dtype=float).reshape(C, D)
        else:
            old = np.full((C, D), 0.5 + b)
            old[0] = 0.5
            for c in range(1, C):
                old[c, c - 1] -= 5 * b
        if self.new_means is not None:
            new = np.asarray(self.new_means, dtype=float).reshape(C, D)
        else:
            new = old.copy()
            new[self.drift_cluster] = 0.5 + b
        return old, new


def gen_drift_stream(schedule: DriftSchedule, cfg: GaussianStreamConfig = GaussianStreamConfig(),
                     seed: int = 0) -> tuple[Stream, Stream, StreamMeta]:
    """Training block from the old concept plus a drifting test stream."""
    old, new = cfg.means()
    rng = np.random.default_rng(seed)
    C, D = cfg.n_clusters, cfg.dim
    train_lab = rng.integers(C, size=cfg.n_train)
    train_noise = rng.normal(0.0, cfg.std, size=(cfg.n_train, D))
    test_lab = rng.integers(C, size=cfg.n_test)
    test_noise = rng.normal(0.0, cfg.std, size=(cfg.n_test, D))
    u = rng.random(cfg.n_test)

    w = _concept(schedule, cfg.n_test, u)
    X_train = old[train_lab] + train_noise
    mu = (1.0 - w)[:, None] * old[test_lab] + w[:, None] * new[test_lab]
    X_test = mu + test_noise
    meta = StreamMeta(dim=D, label_names=[str(c) for c in range(C)],
                      drift_points=schedule.drift_points)
    return Stream(X_train, train_lab), Stream(X_test, test_lab, w), meta


# ---------------------------------------------------------------- fan spectra


@dataclass(frozen=True)
class FanStreamConfig:
    """Vibration-spectrum-like stream: narrow harmonic peaks over a noise floor.

    ``damage`` selects the post-drift spectrum: ``holes`` raises the
    rotation harmonic (mass unbalance), ``chipped`` adds blade-pass
    sidebands and lifts the broadband floor.
    """

    dim: int = 511
    n_train: int = 500
    n_test: int = 700
    rotation_bin: int = 48
    floor: float = 0.05
    noise: float = 0.01
    jitter: float = 0.03
    peak_width: float = 1.5
    damage: str = "holes"
    damage_gain: float = 1.0

    def __post_init__(self):
        if self.damage not in ("holes", "chipped"):
            raise ConfigError(f"unknown fan damage {self.damage!r}")


def _bumps(dim, centers, amps, width):
    f = np.arange(dim, dtype=float)[:, None]
    return (np.asarray(amps)[None, :] * np.exp(-0.5 * ((f - np.asarray(centers)[None, :]) / width) ** 2)).sum(axis=1)


def fan_profiles(cfg: FanStreamConfig) -> tuple[np.ndarray, np.ndarray]:
    """(healthy, damaged) mean spectra."""
    r = cfg.rotation_bin
    harmonics = [r * k for k in range(1, 6) if r * k < cfg.dim]
    amps = [0.6 / k for k in range(1, len(harmonics) + 1)]
    healthy = cfg.floor + _bumps(cfg.dim, harmonics, amps, cfg.peak_width)
    g = cfg.damage_gain
    if cfg.damage == "holes":
        extra = _bumps(cfg.dim, harmonics[:2], [0.9 * g, 0.35 * g], cfg.peak_width)
        damaged = healthy + extra + 0.01 * g
    else:
        side = [h + s for h in harmonics[:3] for s in (-6, 6)]
        extra = _bumps(cfg.dim, side, [0.25 * g] * len(side), cfg.peak_width)
        damaged = healthy + extra + 0.012 * g
    return healthy, damaged


def gen_fan_stream(schedule: DriftSchedule, cfg: FanStreamConfig = FanStreamConfig(),
                   seed: int = 0) -> tuple[Stream, Stream, StreamMeta]:
    healthy, damaged = fan_profiles(cfg)
    rng = np.random.default_rng(seed)
    D = cfg.dim
    train_gain = 1.0 + rng.normal(0.0, cfg.jitter, size=(cfg.n_train, 1))
    train_noise = rng.normal(0.0, cfg.noise, size=(cfg.n_train, D))
    test_gain = 1.0 + rng.normal(0.0, cfg.jitter, size=(cfg.n_test, 1))
    test_noise = rng.normal(0.0, cfg.noise, size=(cfg.n_test, D))
    u = rng.random(cfg.n_test)

    w = _concept(schedule, cfg.n_test, u)
    X_train = healthy * train_gain + train_noise
    mu = (1.0 - w)[:, None] * healthy + w[:, None] * damaged
    X_test = mu * test_gain + test_noise
    meta = StreamMeta(dim=D, drift_points=schedule.drift_points)
    return Stream(X_train), Stream(X_test, None, w), meta


FAN_SCHEDULES = {
    "sudden": DriftSchedule("sudden", 120),
    "gradual": DriftSchedule("gradual", 120, 600),
    "reoccurring": DriftSchedule("reoccurring", 120, 170),
}
