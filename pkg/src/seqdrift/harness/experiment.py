"""Run one method over one stream and summarize accuracy, delay and state size."""

from __future__ import annotations

import csv
import json
import time
from collections import defaultdict, deque
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from ..detector import Detector, Mode, init_state
from ..discriminator import Discriminator, fit_initial
from ..oselm import OselmParams
from ..streams import Stream, StreamMeta, kmeans_label
from .audit import audit_detector, audit_state_size
from .config import ExperimentConfig
from .reference import external_reference

PHASE_NAMES = {
    "label_prediction": "Label prediction",
    "distance_computation": "Distance computation",
    "retrain_without_prediction": "Model retraining without label prediction",
    "retrain_with_prediction": "Model retraining with label prediction",
    "coord_init": "Label coordinates initialization",
    "coord_update": "Label coordinates update",
}

TRACE_FIELDS = ("index", "true_label", "predicted_label", "score", "dist", "mode", "drift_detected")


class PhaseTimer:
    """Accumulates wall-clock time per named phase."""

    def __init__(self):
        self.total = defaultdict(float)
        self.count = defaultdict(int)

    @contextmanager
    def __call__(self, name):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.total[name] += time.perf_counter() - t0
            self.count[name] += 1

    def mean_ms(self) -> dict[str, float]:
        return {k: 1e3 * self.total[k] / self.count[k] for k in self.total}


@dataclass
class TraceRow:
    index: int
    true_label: Optional[int]
    predicted_label: int
    score: float
    dist: float
    mode: str
    drift_detected: bool


@dataclass
class ExperimentReport:
    method: str
    n_samples: int
    accuracy_overall: Optional[float]
    accuracy_timeline: list = field(default_factory=list)
    detection_delays: list = field(default_factory=list)
    detections: list = field(default_factory=list)
    false_alarms: int = 0
    reconstructions: list = field(default_factory=list)
    state_bytes_timeline: list = field(default_factory=list)
    phase_timings: dict = field(default_factory=dict)
    thresholds: dict = field(default_factory=dict)
    external_reference: dict = field(default_factory=dict)
    trace: list = field(default_factory=list, repr=False)

    def to_dict(self, timings: bool = True) -> dict:
        out = asdict(self)
        out.pop("trace")
        if not timings:
            out.pop("phase_timings")
        return out

    def to_json(self, timings: bool = True) -> str:
        return json.dumps(self.to_dict(timings), indent=2)

    def first_detection_after(self, index: int) -> Optional[int]:
        later = [i for i in self.detections if i >= index]
        return later[0] if later else None

    def accuracy_between(self, start: int, stop: int) -> Optional[float]:
        rows = [r for r in self.trace[start:stop] if r.true_label is not None]
        if not rows:
            return None
        return float(np.mean([r.predicted_label == r.true_label for r in rows]))


def initial_labels(cfg: ExperimentConfig, train: Stream) -> np.ndarray:
    if cfg.initial_labels == "kmeans" or train.labels is None:
        C = cfg.num_classes or 1
        return kmeans_label(train.X, C, seed=cfg.seed, max_iters=cfg.kmeans_iters)
    return train.labels


def build_discriminator(cfg: ExperimentConfig, train: Stream) -> Discriminator:
    params = OselmParams(
        input_dim=train.dim,
        hidden_dim=cfg.oselm.hidden_dim,
        activation=cfg.oselm.activation,
        seed=cfg.seed,
        ridge_lambda=cfg.oselm.ridge_lambda,
    )
    labels = initial_labels(cfg, train)
    d = fit_initial(train.X, labels, params, epochs=cfg.epochs, k_err=cfg.detector.k_err,
                    num_classes=cfg.num_classes)
    if cfg.detector.theta_error is not None:
        d.theta_error = cfg.detector.theta_error
    if cfg.detector.theta_drift is not None:
        d.theta_drift = cfg.detector.theta_drift
    return d


def attribute_detections(detections: list[int], drift_points: list[int]) -> tuple[list, int]:
    """Pair each true drift with its first detection; count earlier detections as false alarms.

    A detection is only attributed to a drift that has already happened,
    and only before the next drift starts.
    """
    points = sorted(drift_points)
    delays = []
    for i, p in enumerate(points):
        stop = points[i + 1] if i + 1 < len(points) else float("inf")
        hit = next((j for j in detections if p <= j < stop), None)
        delays.append((p, hit, None if hit is None else hit - p))
    first = points[0] if points else float("inf")
    false_alarms = sum(1 for j in detections if j < first)
    return delays, false_alarms


def rolling_accuracy(trace: list[TraceRow], window: int) -> list[tuple[int, float]]:
    buf = deque(maxlen=window)
    out = []
    for r in trace:
        if r.true_label is None:
            continue
        buf.append(r.predicted_label == r.true_label)
        out.append((r.index, sum(buf) / len(buf)))
    return out


def run_experiment(cfg: ExperimentConfig, data=None, discriminator: Discriminator | None = None,
                   timer: PhaseTimer | None = None) -> ExperimentReport:
    """Stream ``cfg``'s test data through the configured method.

    ``data`` may supply a pre-loaded ``(train, test, meta)`` triple and
    ``discriminator`` a pre-trained model (it is modified in place).
    """
    train, test, meta = data if data is not None else cfg.dataset.load(cfg.seed)
    d = discriminator if discriminator is not None else build_discriminator(cfg, train)
    timer = timer if timer is not None else PhaseTimer()
    thresholds = {"theta_error": d.theta_error, "theta_drift": d.theta_drift}

    det = None
    if cfg.method == "proposed":
        det = Detector(d, cfg.detector.window, cfg.reconstruction,
                       reset_window=cfg.detector.reset_window, repredict=cfg.detector.repredict,
                       recency_weight=cfg.detector.recency_weight, timer=timer)
    elif cfg.method == "onlad_forgetting":
        for m in d.instances:
            m.params = m.params.replace(forgetting_rate=cfg.oselm.forgetting_rate)

    trace: list[TraceRow] = []
    detections, recons, sizes = [], [], []
    recon_start = None
    for s in test:
        i = s.index
        if det is not None:
            out = det.step(s.x)
            score = out.prediction.score if out.prediction is not None else float("nan")
            row = TraceRow(i, s.true_label, out.label, score, out.dist, out.mode.value, out.drift_detected)
            if out.drift_detected:
                detections.append(i)
                recon_start = i
            if out.reconstruction_done or out.reconstruction_failed:
                recons.append({"start": recon_start, "end": i, "ok": out.reconstruction_done,
                               "theta_error": d.theta_error, "theta_drift": d.theta_drift})
                recon_start = None
        else:
            with timer("label_prediction"):
                pred = d.predict(s.x)
            if cfg.method == "onlad_forgetting":
                d.instances[pred.label].seq_train(s.x)
            row = TraceRow(i, s.true_label, d.mapped(pred.label), pred.score, 0.0, Mode.NORMAL.value, False)
        trace.append(row)
        if (i + 1) % cfg.audit_every == 0:
            size = audit_detector(det) if det is not None else audit_state_size(
                init_state(d, cfg.detector.window), d)
            sizes.append((i, size))

    delays, false_alarms = attribute_detections(detections, meta.drift_points)
    labeled = [r for r in trace if r.true_label is not None]
    acc = float(np.mean([r.predicted_label == r.true_label for r in labeled])) if labeled else None
    return ExperimentReport(
        method=cfg.method,
        n_samples=len(trace),
        accuracy_overall=acc,
        accuracy_timeline=rolling_accuracy(trace, cfg.smoothing),
        detection_delays=delays,
        detections=detections,
        false_alarms=false_alarms,
        reconstructions=recons,
        state_bytes_timeline=sizes,
        phase_timings=timer.mean_ms(),
        thresholds=thresholds,
        external_reference=external_reference(cfg.dataset.kind),
        trace=trace,
    )


def write_trace(path, trace: list[TraceRow]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TRACE_FIELDS)
        for r in trace:
            w.writerow([
                r.index,
                "" if r.true_label is None else r.true_label,
                r.predicted_label,
                "" if np.isnan(r.score) else repr(r.score),
                repr(r.dist),
                r.mode,
                int(r.drift_detected),
            ])


def write_timeline(path, timeline) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("index", "rolling_accuracy"))
        w.writerows(timeline)
