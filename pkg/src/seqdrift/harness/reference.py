"""Published figures for batch drift detectors that are not implemented here.

Quant Tree and SPLL buffer whole batches before testing for drift.  They
are kept as fixed comparison numbers only, so reports can place a run next
to them without re-running either method.
"""

from __future__ import annotations

EXTERNAL_REFERENCE: dict[str, dict[str, dict[str, float]]] = {
    "nslkdd": {
        "quant_tree": {"accuracy_pct": 96.8, "delay": 296, "batch_size": 480},
        "spll": {"accuracy_pct": 96.3, "delay": 296, "batch_size": 480},
    },
    "fan": {
        "quant_tree": {"memory_kb": 619, "time_700_samples_s": 1.52, "batch_size": 235},
        "spll": {"memory_kb": 1933, "time_700_samples_s": 9.28, "batch_size": 235},
    },
}


def external_reference(dataset_kind: str) -> dict:
    """Reference numbers for ``dataset_kind``; empty when none were published."""
    return {k: dict(v) for k, v in EXTERNAL_REFERENCE.get(dataset_kind, {}).items()}
