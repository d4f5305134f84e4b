"""Exception types raised across the package."""


class SeqDriftError(Exception):
    """Base class for all package errors."""


class ConfigError(SeqDriftError, ValueError):
    """Invalid parameters or configuration."""


class DataError(SeqDriftError, ValueError):
    """Malformed, non-finite or dimensionally inconsistent input data."""


class NumericalError(SeqDriftError, ArithmeticError):
    """A recursive update hit a degenerate denominator."""


class ReconstructionError(SeqDriftError):
    """Model reconstruction could not produce a usable model."""
