class AffclustError(Exception):
    """Base class for errors raised by this package."""


class DataValidationError(AffclustError, ValueError):
    """Input data is well-formed but inconsistent (e.g. truth/corpus mismatch)."""


class RankError(DataValidationError, IndexError):
    """Requested component rank does not exist in a clustering."""
