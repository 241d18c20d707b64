"""Exception hierarchy shared across the toolkit."""


class SpmvProbeError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(SpmvProbeError):
    """Matrix and vector shapes do not agree."""


class EmptyMatrixError(SpmvProbeError):
    """A per-row or per-element statistic is undefined for an empty matrix."""


class CapacityExceededError(SpmvProbeError):
    """A padded (ELL/HYB) layout would exceed the configured memory ceiling."""


class InfeasibleError(SpmvProbeError):
    """Generation parameters cannot be satisfied (e.g. longest row exceeds
    its bandwidth window)."""


class CorrectnessError(SpmvProbeError):
    """A benchmarked kernel disagreed with the reference result."""


class EmptyInputError(SpmvProbeError):
    """A statistic over an empty collection was requested."""


class UnknownFeatureError(SpmvProbeError):
    """A report referenced a feature name that does not exist."""


class ParseError(SpmvProbeError):
    """A text input (Matrix Market, manifest, CSV) could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnsupportedFieldError(ParseError):
    """The file uses a Matrix Market field/symmetry this reader rejects."""


class BinaryFormatError(SpmvProbeError):
    """A binary matrix cache file is truncated, corrupt, or version-mismatched."""
