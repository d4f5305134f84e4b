"""NSL-KDD preparation for the normal-vs-neptune drift experiment.

The raw files (``KDDTrain+.txt`` and ``KDDTest+.txt``) are not shipped.
Rows are filtered to the ``normal`` and ``neptune`` labels and the three
categorical columns are dropped, leaving 38 numeric features.  A seeded
subset of the training file supplies the initial training block and the
pre-drift part of the test stream; every filtered row of the test file
follows, so the distribution shift starts at ``drift_at``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import DataError
from .base import Stream, StreamMeta
from .io import MinMaxScaler

LABELS = ("normal", "neptune")
CATEGORICAL = (1, 2, 3)  # protocol_type, service, flag
N_RAW_FEATURES = 41

DOWNLOAD_HINT = (
    "NSL-KDD is not bundled. Download KDDTrain+.txt and KDDTest+.txt from "
    "https://www.unb.ca/cic/datasets/nsl.html and pass their paths "
    "(or set SEQDRIFT_NSLKDD_DIR to the directory holding them)."
)


@dataclass(frozen=True)
class NslKddConfig:
    n_train: int = 2522
    drift_at: int = 8333
    seed: int = 0
    expected_post_drift: int = 14368


def _read(path: Path) -> tuple[np.ndarray, np.ndarray]:
    if not path.is_file():
        raise DataError(f"{path} not found. {DOWNLOAD_HINT}")
    keep = [j for j in range(N_RAW_FEATURES) if j not in CATEGORICAL]
    feats, labels = [], []
    with open(path, newline="") as fh:
        for line, row in enumerate(csv.reader(fh), start=1):
            if not row:
                continue
            if len(row) < N_RAW_FEATURES + 1:
                raise DataError(f"{path}: row {line} has {len(row)} fields")
            label = row[N_RAW_FEATURES].strip()
            if label not in LABELS:
                continue
            try:
                feats.append([float(row[j]) for j in keep])
            except ValueError as exc:
                raise DataError(f"{path}: row {line}: {exc}") from None
            labels.append(LABELS.index(label))
    return np.asarray(feats, dtype=float).reshape(-1, len(keep)), np.asarray(labels, dtype=np.int64)


def prepare_nslkdd(raw_train, raw_test, cfg: NslKddConfig = NslKddConfig()) -> tuple[Stream, Stream, StreamMeta]:
    X_a, y_a = _read(Path(raw_train))
    X_b, y_b = _read(Path(raw_test))
    need = cfg.n_train + cfg.drift_at
    if len(X_a) < need:
        raise DataError(f"{raw_train}: only {len(X_a)} normal/neptune rows, need {need}")
    if len(X_b) == 0:
        raise DataError(f"{raw_test}: no normal/neptune rows")
    order = np.random.default_rng(cfg.seed).permutation(len(X_a))[:need]
    tr, pre = order[:cfg.n_train], order[cfg.n_train:]

    scaler = MinMaxScaler(clip=True).fit(X_a[tr])
    X_train = scaler.transform(X_a[tr])
    X_test = scaler.transform(np.vstack([X_a[pre], X_b]))
    y_test = np.concatenate([y_a[pre], y_b])
    meta = StreamMeta(dim=X_train.shape[1], label_names=list(LABELS), drift_points=[cfg.drift_at])
    return Stream(X_train, y_a[tr]), Stream(X_test, y_test), meta
