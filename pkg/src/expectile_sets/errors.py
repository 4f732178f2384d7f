"""Exception hierarchy shared by the library and the CLI."""


class ExpectileError(Exception):
    """Base class for all errors raised by this package."""


class InputError(ExpectileError, ValueError):
    """Malformed data: empty samples, bad weights, dimension mismatches."""


class ParameterError(InputError):
    """A level or tuning parameter lies outside its admissible domain."""


class UnsupportedConeError(ExpectileError, ValueError):
    """The cone cannot be handled (e.g. angular width above pi in 2D)."""


class ModelError(ExpectileError, ValueError):
    """A modelling hypothesis is violated (e.g. cone not containing R^d_+)."""


class UnsupportedDimensionError(ExpectileError):
    """The requested construction is not offered in this dimension."""


class SizeLimitError(ExpectileError):
    """Exhaustive enumeration would be too large."""
