"""Exception hierarchy for pmakit.

Everything raised on purpose by this package derives from PmaError, so
callers can catch one type at the boundary.  InvalidInputError also
subclasses ValueError because that is what numpy-adjacent code expects
from argument validation.
"""


class PmaError(Exception):
    """Base class for all pmakit errors."""


class InvalidInputError(PmaError, ValueError):
    """An argument failed validation (shape, dtype, range, finiteness)."""


class SingularMatrixError(PmaError):
    """A linear solve hit a numerically singular system."""


class DegeneratePoolError(PmaError):
    """A sub-model pool is unusable (e.g. every coefficient vector is zero)."""


class DataError(PmaError):
    """Base class for dataset ingestion and partitioning problems."""


class IngestionError(DataError):
    """Raw data could not be turned into a usable dataset.

    Carries the cleaning log accumulated up to the failure so the caller
    can see what was dropped before things went wrong.
    """

    def __init__(self, message, log=None):
        super().__init__(message)
        self.log = list(log) if log else []


class StratificationError(DataError):
    """A stratified split could not give every part both classes."""


class ConfigError(PmaError):
    """An experiment configuration is inconsistent or incomplete."""


class ExperimentError(PmaError):
    """A benchmark run failed badly enough that results are meaningless."""
