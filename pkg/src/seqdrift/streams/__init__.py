"""Stream ingestion, labeling and synthetic drift generation."""

from .base import Stream, StreamMeta, StreamSample
from .io import CsvSchema, MinMaxScaler, load_csv, write_csv
from .kmeans import kmeans_label
from .nslkdd import NslKddConfig, prepare_nslkdd
from .synthetic import (
    DriftSchedule,
    FanStreamConfig,
    GaussianStreamConfig,
    gen_drift_stream,
    gen_fan_stream,
)

__all__ = [
    "CsvSchema",
    "DriftSchedule",
    "FanStreamConfig",
    "GaussianStreamConfig",
    "MinMaxScaler",
    "NslKddConfig",
    "Stream",
    "StreamMeta",
    "StreamSample",
    "gen_drift_stream",
    "gen_fan_stream",
    "kmeans_label",
    "load_csv",
    "prepare_nslkdd",
    "write_csv",
]
