"""Exception types and the exit codes the command line maps them to."""


class DereverbError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(DereverbError):
    """An argument is outside its documented domain (empty, non-finite, ...)."""


class ShapeError(DereverbError):
    """Array shapes or transform geometry do not agree."""


class FormatError(DereverbError):
    """A file is missing, truncated, or not in the expected format."""


class DataError(DereverbError):
    """A file parsed but holds values outside the documented domain."""


class NumericalError(DereverbError):
    """A numerical routine failed (e.g. a non-positive Cholesky pivot)."""

    def __init__(self, message, band=None):
        super().__init__(message)
        self.band = band


# Process exit codes used by the CLI. 0 is success.
EXIT_IO = 2
EXIT_FORMAT = 3
EXIT_CONFIG = 4
EXIT_NUMERIC = 5
