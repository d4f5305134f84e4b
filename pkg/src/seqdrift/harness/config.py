"""Experiment configuration, loaded from TOML."""

from __future__ import annotations

import dataclasses
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..errors import ConfigError
from ..reconstruction import ReconstructionConfig
from ..streams import (
    CsvSchema,
    DriftSchedule,
    FanStreamConfig,
    GaussianStreamConfig,
    NslKddConfig,
    gen_drift_stream,
    gen_fan_stream,
    load_csv,
    prepare_nslkdd,
)

METHODS = ("proposed", "baseline_no_detector", "onlad_forgetting")
DATASETS = ("gaussian", "fan", "csv", "nslkdd")


@dataclass
class OselmConfig:
    hidden_dim: int = 4
    activation: str = "sigmoid"
    ridge_lambda: float = 0.01
    forgetting_rate: float = 0.97


@dataclass
class DetectorConfig:
    window: int = 100
    theta_error: Optional[float] = None
    theta_drift: Optional[float] = None
    k_err: float = 1.0
    reset_window: bool = True
    repredict: bool = True
    recency_weight: Optional[float] = None


@dataclass
class DatasetConfig:
    kind: str = "gaussian"
    schedule: Optional[DriftSchedule] = None
    options: dict = field(default_factory=dict)

    def load(self, seed: int):
        """Return ``(train, test, meta)`` for this dataset."""
        opts = dict(self.options)
        if self.kind == "gaussian":
            sched = self.schedule or DriftSchedule("sudden", 2000)
            return gen_drift_stream(sched, _build(GaussianStreamConfig, opts, "dataset"), seed)
        if self.kind == "fan":
            sched = self.schedule or DriftSchedule("sudden", 120)
            return gen_fan_stream(sched, _build(FanStreamConfig, opts, "dataset"), seed)
        if self.kind == "csv":
            path = opts.pop("path", None)
            if path is None:
                raise ConfigError("csv dataset needs a path")
            return load_csv(path, _build(CsvSchema, opts, "dataset"))
        if self.kind == "nslkdd":
            root = Path(os.environ.get("SEQDRIFT_NSLKDD_DIR", "data/nslkdd"))
            train_path = opts.pop("train_path", root / "KDDTrain+.txt")
            test_path = opts.pop("test_path", root / "KDDTest+.txt")
            opts.setdefault("seed", seed)
            return prepare_nslkdd(train_path, test_path, _build(NslKddConfig, opts, "dataset"))
        raise ConfigError(f"unknown dataset kind {self.kind!r}")


@dataclass
class ExperimentConfig:
    method: str = "proposed"
    seed: int = 0
    dataset: DatasetConfig = field(default_factory=DatasetConfig)
    oselm: OselmConfig = field(default_factory=OselmConfig)
    detector: DetectorConfig = field(default_factory=DetectorConfig)
    reconstruction: ReconstructionConfig = field(default_factory=ReconstructionConfig)
    initial_labels: str = "true"
    num_classes: Optional[int] = None
    epochs: int = 3
    smoothing: int = 200
    audit_every: int = 1000
    kmeans_iters: int = 100

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.dataset.kind not in DATASETS:
            raise ConfigError(f"unknown dataset kind {self.dataset.kind!r}")
        if self.initial_labels not in ("true", "kmeans"):
            raise ConfigError("initial_labels must be 'true' or 'kmeans'")
        if self.initial_labels == "kmeans" and self.num_classes is None:
            raise ConfigError("initial_labels = 'kmeans' needs num_classes")
        if self.method == "onlad_forgetting" and not 0 < self.oselm.forgetting_rate <= 1:
            raise ConfigError("onlad_forgetting needs forgetting_rate in (0, 1]")
        if self.detector.window < 1:
            raise ConfigError("detector.window must be >= 1")
        if self.smoothing < 1 or self.audit_every < 1 or self.epochs < 1:
            raise ConfigError("smoothing, audit_every and epochs must be >= 1")

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        sched = self.dataset.schedule
        out["dataset"]["schedule"] = None if sched is None else dataclasses.asdict(sched)
        return out


def _build(cls, values: dict, section: str):
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(values) - names
    if unknown:
        raise ConfigError(f"[{section}] unknown keys: {sorted(unknown)}")
    try:
        return cls(**{k: tuple(v) if isinstance(v, list) and k.endswith("means") else v
                      for k, v in values.items()})
    except TypeError as exc:
        raise ConfigError(f"[{section}] {exc}") from None


def config_from_dict(raw: dict[str, Any]) -> ExperimentConfig:
    raw = dict(raw)
    ds = dict(raw.pop("dataset", {}))
    kind = ds.pop("kind", "gaussian")
    sched = ds.pop("schedule", None)
    schedule = _build(DriftSchedule, sched, "dataset.schedule") if sched is not None else None
    dataset = DatasetConfig(kind=kind, schedule=schedule, options=ds)
    oselm = _build(OselmConfig, raw.pop("oselm", {}), "oselm")
    detector = _build(DetectorConfig, raw.pop("detector", {}), "detector")
    recon = _build(ReconstructionConfig, raw.pop("reconstruction", {}), "reconstruction")
    top = _build(ExperimentConfig, {**raw, "dataset": dataset, "oselm": oselm,
                                    "detector": detector, "reconstruction": recon}, "top level")
    return top


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return config_from_dict(raw)
