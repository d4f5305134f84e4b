"""State-size accounting for the constant-memory check."""

from __future__ import annotations

import numpy as np

from ..checkpoint import discriminator_arrays, pack_arrays
from ..detector import Detector, DetectorState
from ..discriminator import Discriminator
from ..reconstruction import ReconstructionState


def _workspace_placeholder(d: Discriminator) -> dict:
    # the rebuild workspace is counted even when idle: a device must reserve it
    C, D, H = d.num_classes, d.dim, d.params.hidden_dim
    out = {"r_cor": np.zeros((C, D)), "r_num": np.zeros(C, dtype=np.int64),
           "r_scalars": np.zeros(3, dtype=np.int64), "r_logs": np.zeros(6)}
    for c in range(C):
        out.update({f"r{c}_alpha": np.zeros((D, H)), f"r{c}_bias": np.zeros(H),
                    f"r{c}_beta": np.zeros((H, D)), f"r{c}_P": np.zeros((H, H))})
    return out


def state_breakdown(state: DetectorState, d: Discriminator,
                    r: ReconstructionState | None = None) -> dict[str, int]:
    """Serialized bytes per component: detector, discriminator, rebuild workspace."""
    workspace = r.arrays() if r is not None else _workspace_placeholder(d)
    return {
        "detector": len(pack_arrays(state.arrays())),
        "discriminator": len(pack_arrays(discriminator_arrays(d))),
        "reconstruction": len(pack_arrays(workspace)),
    }


def audit_state_size(state: DetectorState, d: Discriminator,
                     r: ReconstructionState | None = None) -> int:
    return sum(state_breakdown(state, d, r).values())


def audit_detector(det: Detector) -> int:
    return audit_state_size(det.state, det.d, det.rstate)


def batch_buffer_bytes(batch: int, dim: int, itemsize: int = 8) -> int:
    """Raw bytes a batch detector needs just to hold ``batch`` samples."""
    return batch * dim * itemsize
