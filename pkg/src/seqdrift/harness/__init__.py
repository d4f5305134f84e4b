from .audit import audit_detector, audit_state_size, batch_buffer_bytes, state_breakdown
from .bench import format_timings, time_phases
from .config import DatasetConfig, DetectorConfig, ExperimentConfig, OselmConfig, config_from_dict, load_config
from .experiment import (
    PHASE_NAMES,
    ExperimentReport,
    PhaseTimer,
    TraceRow,
    build_discriminator,
    run_experiment,
    write_timeline,
    write_trace,
)
from .reference import EXTERNAL_REFERENCE, external_reference

__all__ = [
    "EXTERNAL_REFERENCE",
    "DatasetConfig",
    "DetectorConfig",
    "ExperimentConfig",
    "ExperimentReport",
    "OselmConfig",
    "PhaseTimer",
    "PHASE_NAMES",
    "TraceRow",
    "audit_detector",
    "audit_state_size",
    "batch_buffer_bytes",
    "build_discriminator",
    "config_from_dict",
    "external_reference",
    "format_timings",
    "load_config",
    "run_experiment",
    "state_breakdown",
    "time_phases",
    "write_timeline",
    "write_trace",
]
