"""Multi-instance discriminative model: one autoencoder per label.

A sample is assigned the label whose autoencoder reconstructs it best.
Trained centroids and the two detection thresholds live here as well,
since both are fitted on the same initial samples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ConfigError, DataError
from .oselm import OselmModel, OselmParams


class Prediction(NamedTuple):
    label: int
    score: float


def mean_plus_std(values, k: float = 1.0) -> float:
    """``mean + k * std`` with the population (divide-by-N) deviation."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise DataError("cannot compute a threshold from an empty array")
    mu = v.mean()
    return float(mu + k * np.sqrt(np.mean((v - mu) ** 2)))


@dataclass
class RunningStats:
    """Welford accumulator for a streaming mean and population variance."""

    n: int = 0
    mean: float = 0.0
    m2: float = 0.0

    def push(self, value: float) -> None:
        self.n += 1
        delta = value - self.mean
        self.mean += delta / self.n
        self.m2 += delta * (value - self.mean)

    @property
    def std(self) -> float:
        return float(np.sqrt(self.m2 / self.n)) if self.n else 0.0

    def threshold(self, k: float = 1.0) -> float:
        if self.n == 0:
            raise DataError("no values accumulated")
        return self.mean + k * self.std


def instance_seed(base: int, generation: int, index: int) -> int:
    """Deterministic per-instance seed; generation > 0 for rebuilt models."""
    return int(np.random.SeedSequence([base, generation, index]).generate_state(1, dtype=np.uint64)[0])


def l1_to_rows(rows: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.abs(rows - x).sum(axis=1)


@dataclass(eq=False)
class Discriminator:
    """C autoencoder instances plus per-label trained centroids and thresholds.

    ``label_map`` translates instance indices to the label ids used by the
    data (identity after supervised training; after an unsupervised rebuild
    each new cluster inherits the label of its nearest previous centroid).
    """

    instances: list[OselmModel]
    train_cor: np.ndarray
    train_num: np.ndarray
    theta_error: float = 0.0
    theta_drift: float = 0.0
    k_err: float = 1.0
    label_map: np.ndarray = None
    base_seed: int = 0
    generation: int = 0

    def __post_init__(self):
        C = len(self.instances)
        if C == 0:
            raise ConfigError("a discriminator needs at least one instance")
        dims = {(m.input_dim, m.hidden_dim) for m in self.instances}
        if len(dims) != 1:
            raise ConfigError(f"instances disagree on (D, H): {sorted(dims)}")
        self.train_cor = np.asarray(self.train_cor, dtype=float)
        if self.train_cor.shape != (C, self.dim):
            raise ConfigError(f"train_cor must have shape {(C, self.dim)}, got {self.train_cor.shape}")
        self.train_num = np.asarray(self.train_num, dtype=np.int64)
        if self.label_map is None:
            self.label_map = np.arange(C, dtype=np.int64)
        self.label_map = np.asarray(self.label_map, dtype=np.int64)
        if self.theta_error < 0 or self.theta_drift < 0:
            raise ConfigError("thresholds must be nonnegative")

    @property
    def num_classes(self) -> int:
        return len(self.instances)

    @property
    def dim(self) -> int:
        return self.instances[0].input_dim

    @property
    def params(self) -> OselmParams:
        return self.instances[0].params

    def scores(self, x) -> np.ndarray:
        return np.array([m.anomaly_score(x) for m in self.instances])

    def predict(self, x) -> Prediction:
        """Label of the instance with the smallest anomaly score (lowest index on ties)."""
        s = self.scores(x)
        c = int(np.argmin(s))
        return Prediction(c, float(s[c]))

    def mapped(self, label: int) -> int:
        return int(self.label_map[label])

    def calibrate(self, X) -> tuple[float, float]:
        """Thresholds from samples ``X``: (theta_error, theta_drift).

        ``theta_drift`` is mean + std of the L1 distance between each sample
        and the trained centroid of its predicted label; ``theta_error`` is
        mean + ``k_err`` * std of the winning anomaly scores.
        """
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[0] == 0:
            raise DataError("calibration needs a nonempty 2-D sample array")
        errs = np.empty(len(X))
        dists = np.empty(len(X))
        for i, x in enumerate(X):
            c, errs[i] = self.predict(x)
            dists[i] = np.abs(x - self.train_cor[c]).sum()
        return mean_plus_std(errs, self.k_err), mean_plus_std(dists)


def fit_initial(X, labels, params: OselmParams, epochs: int = 3, k_err: float = 1.0,
                num_classes: int | None = None) -> Discriminator:
    """Train one instance per label and calibrate both thresholds.

    Instance ``c`` sees every label-``c`` sample ``epochs`` times in stream
    order, with no forgetting.
    """
    X = np.asarray(X, dtype=float)
    labels = np.asarray(labels)
    if X.ndim != 2 or X.shape[1] != params.input_dim:
        raise DataError(f"samples must have shape (n, {params.input_dim}), got {X.shape}")
    if len(labels) != len(X):
        raise DataError("samples and labels differ in length")
    if epochs < 1:
        raise ConfigError("epochs must be >= 1")
    C = int(labels.max()) + 1 if num_classes is None else num_classes
    if labels.min() < 0 or labels.max() >= C:
        raise DataError(f"labels must lie in [0, {C})")

    train_params = params.replace(forgetting_rate=1.0)
    instances, cor, num = [], np.zeros((C, X.shape[1])), np.zeros(C, dtype=np.int64)
    for c in range(C):
        members = X[labels == c]
        if len(members) == 0:
            raise DataError(f"class {c} has no training samples")
        model = OselmModel.new(train_params.replace(seed=instance_seed(params.seed, 0, c)))
        for _ in range(epochs):
            for x in members:
                model.seq_train(x)
        instances.append(model)
        cor[c] = members.mean(axis=0)
        num[c] = len(members)

    d = Discriminator(instances, cor, num, k_err=k_err, base_seed=params.seed)
    d.theta_error, d.theta_drift = d.calibrate(X)
    return d
