"""Four-phase sequential rebuild of a discriminator after a detected drift.

Samples are routed by their position ``k`` (0-based) inside the rebuild:

* ``k < n_search``            spread-maximizing coordinate seeding
* ``n_search <= k < n_update``  sequential k-means refinement of the coordinates
* ``n_update <= k < n / 2``     retrain the fresh instance of the nearest coordinate
* ``n / 2 <= k < n``            retrain the fresh instance that predicts the sample

Nothing from the stream is buffered; the old discriminator is untouched
until :func:`finalize` swaps the rebuilt instances in.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .discriminator import Discriminator, RunningStats, instance_seed, l1_to_rows
from .errors import ConfigError, NumericalError, ReconstructionError
from .oselm import OselmModel

PHASES = ("init_coord", "update_coord", "retrain_nearest", "retrain_predicted")


@dataclass(frozen=True)
class ReconstructionConfig:
    n_search: int = 50
    n_update: int = 150
    n: int = 600

    def __post_init__(self):
        if not (0 < self.n_search <= self.n_update and 2 * self.n_update <= self.n):
            raise ConfigError(
                "need 0 < n_search <= n_update <= n/2, got "
                f"n_search={self.n_search}, n_update={self.n_update}, n={self.n}"
            )

    @property
    def half(self) -> int:
        # count < n/2 for integer count
        return (self.n + 1) // 2

    def phase_of(self, k: int) -> int:
        if k < self.n_search:
            return 0
        if k < self.n_update:
            return 1
        if k < self.half:
            return 2
        return 3


def pairwise_l1_sum(cor: np.ndarray) -> float:
    """Sum of L1 distances over all unordered pairs of rows."""
    total = 0.0
    for j in range(len(cor) - 1):
        total += np.abs(cor[j + 1:] - cor[j]).sum()
    return float(total)


def init_coord(cor: np.ndarray, x) -> int:
    """Replace one row of ``cor`` by ``x`` if that strictly grows the pairwise spread.

    Every single-row substitution is tried; the best one is committed.
    Returns the replaced row index, or -1 when ``cor`` is left unchanged.
    """
    best = pairwise_l1_sum(cor)
    label = -1
    for c in range(len(cor)):
        tmp = cor[c].copy()
        cor[c] = x
        spread = pairwise_l1_sum(cor)
        cor[c] = tmp
        if best < spread:
            label, best = c, spread
    if label != -1:
        cor[label] = x
    return label


def update_coord(cor: np.ndarray, num: np.ndarray, x) -> int:
    """Sequential k-means step: move the L1-nearest row toward ``x``."""
    label = int(np.argmin(l1_to_rows(cor, x)))
    cor[label] = (cor[label] * num[label] + x) / (num[label] + 1)
    num[label] += 1
    return label


@dataclass(eq=False)
class ReconstructionState:
    cfg: ReconstructionConfig
    cor: np.ndarray
    num: np.ndarray
    fresh_models: list[OselmModel]
    count: int = 0
    filled: int = 0
    dist_log: RunningStats = field(default_factory=RunningStats)
    err_log: RunningStats = field(default_factory=RunningStats)
    last_label: int = -1
    last_score: float = float("nan")
    last_phase: int = -1

    @property
    def num_classes(self) -> int:
        return len(self.fresh_models)

    def arrays(self) -> dict:
        out = {"r_cor": self.cor, "r_num": self.num,
               "r_scalars": np.array([self.count, self.filled, self.last_label], dtype=np.int64),
               "r_logs": np.array([self.dist_log.n, self.dist_log.mean, self.dist_log.m2,
                                   self.err_log.n, self.err_log.mean, self.err_log.m2])}
        for c, m in enumerate(self.fresh_models):
            out.update({f"r{c}_{k}": v for k, v in m.arrays().items()})
        return out


def begin_reconstruction(d: Discriminator, cfg: ReconstructionConfig) -> ReconstructionState:
    C = d.num_classes
    if cfg.n_search < C:
        raise ConfigError(f"n_search={cfg.n_search} cannot seed {C} coordinates")
    params = d.params.replace(forgetting_rate=1.0)
    fresh = [OselmModel.new(params.replace(seed=instance_seed(d.base_seed, d.generation + 1, c)))
             for c in range(C)]
    return ReconstructionState(
        cfg=cfg,
        cor=np.zeros((C, d.dim)),
        num=np.zeros(C, dtype=np.int64),
        fresh_models=fresh,
    )


def reconstruct_step(state: ReconstructionState, d: Discriminator, x, timer=None) -> bool:
    """Consume one sample; return False once the rebuild has been finalized.

    ``timer`` is an optional ``(phase_name) -> context manager`` hook used
    by the benchmark harness.
    """
    cfg = state.cfg
    k = state.count
    phase = cfg.phase_of(k)
    state.count += 1
    state.last_phase = phase
    state.last_score = float("nan")
    x = np.asarray(x, dtype=float)

    if phase == 0:
        if state.filled < state.num_classes:
            state.cor[state.filled] = x
            state.last_label = state.filled
            state.filled += 1
        else:
            with _timed(timer, "coord_init"):
                init_coord(state.cor, x)
            state.last_label = int(np.argmin(l1_to_rows(state.cor, x)))
    elif phase == 1:
        if k == cfg.n_search:
            state.num[:] = 1
        with _timed(timer, "coord_update"):
            state.last_label = update_coord(state.cor, state.num, x)
    else:
        try:
            if phase == 2:
                with _timed(timer, "retrain_without_prediction"):
                    label = int(np.argmin(l1_to_rows(state.cor, x)))
                    state.fresh_models[label].seq_train(x)
            else:
                with _timed(timer, "retrain_with_prediction"):
                    scores = [m.anomaly_score(x) for m in state.fresh_models]
                    label = int(np.argmin(scores))
                    state.fresh_models[label].seq_train(x)
                state.last_score = float(scores[label])
                state.err_log.push(state.last_score)
        except NumericalError as exc:
            raise ReconstructionError(f"retraining failed at rebuild sample {k}: {exc}") from exc
        state.last_label = label
        state.dist_log.push(float(np.abs(x - state.cor[label]).sum()))

    if state.count == cfg.n:
        finalize(state, d)
        state.count = 0
        return False
    return True


def finalize(state: ReconstructionState, d: Discriminator) -> None:
    """Swap the rebuilt instances, centroids and thresholds into ``d``."""
    if state.count != state.cfg.n:
        raise ReconstructionError(f"finalize called at count {state.count} before {state.cfg.n}")
    empty = [c for c in range(state.num_classes)
             if state.num[c] == 0 or state.fresh_models[c].trained_count == 0]
    if empty:
        raise ReconstructionError(f"rebuild left clusters {empty} without samples")
    # new cluster -> label of the nearest previous trained centroid
    nearest_old = [int(np.argmin(l1_to_rows(d.train_cor, row))) for row in state.cor]
    d.label_map = d.label_map[nearest_old].copy()
    d.instances = state.fresh_models
    d.train_cor = state.cor.copy()
    d.train_num = state.num.copy()
    d.theta_drift = state.dist_log.threshold()
    d.theta_error = state.err_log.threshold(d.k_err)
    d.generation += 1


def provisional_label(state: ReconstructionState, d: Discriminator) -> int:
    """Data-level label for the last rebuild sample, via the nearest old centroid."""
    if state.last_label < 0:
        return -1
    j = int(np.argmin(l1_to_rows(d.train_cor, state.cor[state.last_label])))
    return d.mapped(j)


class _NullTimer:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


_NULL = _NullTimer()


def _timed(timer, name):
    return _NULL if timer is None else timer(name)
