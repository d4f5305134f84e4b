"""Per-phase timing of the six per-sample operations of the proposed method."""

from __future__ import annotations

import itertools

import numpy as np

from ..detector import centroid_displacement, init_state
from ..reconstruction import begin_reconstruction, init_coord, update_coord
from ..discriminator import l1_to_rows
from .config import ExperimentConfig
from .experiment import PHASE_NAMES, PhaseTimer, build_discriminator


def time_phases(
    cfg: ExperimentConfig, n_samples: int = 200, data=None, repeats: int = 1
) -> dict[str, float]:
    """Mean wall-clock milliseconds per sample for each phase.

    Every phase is run on ``n_samples`` test samples (cycled if the stream
    is shorter), against a discriminator trained as in ``run_experiment``.
    With ``repeats > 1`` the whole measurement is repeated and the smallest
    mean per phase is kept, which filters out scheduler noise.
    """
    n_samples = max(n_samples, 100)
    train, test, _ = data if data is not None else cfg.dataset.load(cfg.seed)
    d = build_discriminator(cfg, train)
    xs = list(itertools.islice(itertools.cycle(test.X), n_samples))
    runs = [_measure(cfg, d, xs) for _ in range(max(repeats, 1))]
    return {k: min(r[k] for r in runs) for k in PHASE_NAMES}


def _measure(cfg, d, xs) -> dict[str, float]:
    timer = PhaseTimer()

    labels = []
    for x in xs:
        with timer("label_prediction"):
            labels.append(d.predict(x).label)

    s = init_state(d, cfg.detector.window)
    for x, c in zip(xs, labels):
        with timer("distance_computation"):
            s.cor[c] = (s.cor[c] * s.num[c] + x) / (s.num[c] + 1)
            s.num[c] += 1
            s.dist = centroid_displacement(s.cor, d.train_cor)

    r = begin_reconstruction(d, cfg.reconstruction)
    r.cor[:] = xs[: d.num_classes] if len(xs) >= d.num_classes else d.train_cor
    for x in xs:
        with timer("coord_init"):
            init_coord(r.cor, x)
    r.num[:] = 1
    for x in xs:
        with timer("coord_update"):
            update_coord(r.cor, r.num, x)
    for x in xs:
        with timer("retrain_without_prediction"):
            label = int(np.argmin(l1_to_rows(r.cor, x)))
            r.fresh_models[label].seq_train(x)
    for x in xs:
        with timer("retrain_with_prediction"):
            label = int(np.argmin([m.anomaly_score(x) for m in r.fresh_models]))
            r.fresh_models[label].seq_train(x)

    return timer.mean_ms()


def format_timings(timings: dict[str, float]) -> str:
    width = max(len(v) for v in PHASE_NAMES.values())
    lines = [f"{'phase':<{width}}  msec/sample"]
    for key, label in PHASE_NAMES.items():
        lines.append(f"{label:<{width}}  {timings[key]:.4f}")
    return "\n".join(lines)
