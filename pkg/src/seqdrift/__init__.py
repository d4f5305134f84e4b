"""Sequential concept-drift detection and model rebuild for OS-ELM autoencoders."""

from .detector import Detector, DetectorState, Mode, StepOutcome, init_state
from .discriminator import Discriminator, Prediction, fit_initial, mean_plus_std
from .errors import ConfigError, DataError, NumericalError, ReconstructionError, SeqDriftError
from .oselm import OselmModel, OselmParams, new_model
from .reconstruction import (
    ReconstructionConfig,
    ReconstructionState,
    begin_reconstruction,
    finalize,
    init_coord,
    reconstruct_step,
    update_coord,
)

__version__ = "0.1.0"
