"""Fully sequential centroid-displacement drift detector.

A sample whose anomaly score reaches ``theta_error`` opens a check window
of ``W`` samples.  Inside the window, the recent centroid of each sample's
predicted label is updated as a running mean and the summed L1
displacement from the trained centroids is recomputed.  When the window
closes, a displacement at or above ``theta_drift`` declares a drift and
the following samples are handed to the model rebuild.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .discriminator import Discriminator, Prediction
from .errors import ConfigError, DataError, ReconstructionError
from .reconstruction import (
    _timed,
    ReconstructionConfig,
    ReconstructionState,
    begin_reconstruction,
    provisional_label,
    reconstruct_step,
)


class Mode(str, Enum):
    NORMAL = "normal"
    CHECKING = "checking"
    RECONSTRUCTING = "reconstructing"


@dataclass
class DetectorState:
    W: int
    cor: np.ndarray
    num: np.ndarray
    drift: bool = False
    check: bool = False
    win: int = 0
    dist: float = 0.0
    last_label: int = -1

    def arrays(self) -> dict:
        return {
            "cor": self.cor,
            "num": self.num,
            "flags": np.array([self.drift, self.check, self.win, self.W, self.last_label], dtype=np.int64),
            "dist": np.array(self.dist),
        }


@dataclass
class StepOutcome:
    prediction: Optional[Prediction]
    drift_detected: bool
    mode: Mode
    label: int = -1
    """Data-level label (after ``label_map``), -1 when none is available."""
    dist: float = 0.0
    reconstruction_done: bool = False
    reconstruction_failed: bool = False


def init_state(d: Discriminator, W: int) -> DetectorState:
    if W < 1:
        raise ConfigError(f"window size must be >= 1, got {W}")
    return DetectorState(W=W, cor=d.train_cor.copy(), num=np.zeros(d.num_classes, dtype=np.int64))


def centroid_displacement(cor: np.ndarray, train_cor: np.ndarray) -> float:
    return float(np.abs(cor - train_cor).sum())


class Detector:
    """Drift detector bound to one discriminator and one stream.

    Parameters
    ----------
    discriminator:
        Trained model; replaced in place when a rebuild finishes.
    window:
        Check-window length ``W``.
    reconstruction:
        Phase lengths of the rebuild.
    reset_window:
        Restart recent centroids from the trained ones whenever a window
        opens.  With ``False`` they persist across windows.
    repredict:
        Predict every window sample's label.  With ``False`` every window
        update uses the label of the sample that opened the window.
    recency_weight:
        Optional weight in (0, 1] for an exponentially weighted recent
        centroid instead of the plain running mean.
    """

    def __init__(self, discriminator: Discriminator, window: int,
                 reconstruction: ReconstructionConfig | None = None,
                 reset_window: bool = True, repredict: bool = True,
                 recency_weight: float | None = None, timer=None):
        if recency_weight is not None and not 0 < recency_weight <= 1:
            raise ConfigError("recency_weight must lie in (0, 1]")
        self.d = discriminator
        self.window = window
        self.rcfg = reconstruction or ReconstructionConfig()
        self.reset_window = reset_window
        self.repredict = repredict
        self.recency_weight = recency_weight
        self.timer = timer
        self.state = init_state(discriminator, window)
        self.rstate: ReconstructionState | None = None

    def _time(self, name):
        return _timed(self.timer, name)

    def _predict(self, x) -> Prediction:
        with self._time("label_prediction"):
            return self.d.predict(x)

    def step(self, x) -> StepOutcome:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.d.dim,):
            raise DataError(f"expected vector of length {self.d.dim}, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise DataError("stream sample contains non-finite values")
        s = self.state
        pred = None
        mode = Mode.NORMAL
        detected = False

        if not s.drift:
            if not s.check:
                pred = self._predict(x)
                s.last_label = pred.label
                if pred.score >= self.d.theta_error:
                    s.check = True
                    s.win = 0
                    if self.reset_window:
                        s.cor[:] = self.d.train_cor
                        s.num[:] = 0
            elif self.repredict:
                pred = self._predict(x)
                s.last_label = pred.label
            else:
                pred = self.d.predict(x)

        if s.check and s.win < s.W:
            mode = Mode.CHECKING
            c = s.last_label
            with self._time("distance_computation"):
                if self.recency_weight is None or s.num[c] == 0:
                    s.cor[c] = (s.cor[c] * s.num[c] + x) / (s.num[c] + 1)
                else:
                    s.cor[c] += self.recency_weight * (x - s.cor[c])
                s.num[c] += 1
                s.dist = centroid_displacement(s.cor, self.d.train_cor)
            s.win += 1
            if s.win == s.W:
                if s.dist >= self.d.theta_drift:
                    s.drift = True
                    detected = True
                s.check = False

        out = StepOutcome(prediction=pred, drift_detected=detected, mode=mode,
                          label=self.d.mapped(pred.label) if pred is not None else -1,
                          dist=s.dist)

        if s.drift:
            out.mode = Mode.RECONSTRUCTING
            if self.rstate is None:
                self.rstate = begin_reconstruction(self.d, self.rcfg)
            r = self.rstate
            try:
                still = reconstruct_step(r, self.d, x, timer=self.timer)
            except ReconstructionError:
                # old instances were never touched; keep them
                self._end_reconstruction()
                out.reconstruction_failed = True
                return out
            if r.last_phase == 3:
                out.prediction = Prediction(r.last_label, r.last_score)
            else:
                out.prediction = None
            out.label = provisional_label(r, self.d)
            if not still:
                self._end_reconstruction()
                out.reconstruction_done = True
        return out

    def _end_reconstruction(self):
        self.rstate = None
        self.state = init_state(self.d, self.window)

    @property
    def mode(self) -> Mode:
        if self.state.drift:
            return Mode.RECONSTRUCTING
        return Mode.CHECKING if self.state.check else Mode.NORMAL
