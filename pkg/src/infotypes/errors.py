"""Exception hierarchy shared across the package.

``DataError`` subclasses signal bad input (exit code 2 on the command line);
everything else that escapes is treated as a runtime failure.
"""


class InfoTypeError(Exception):
    """Base class for all package errors."""


class DataError(InfoTypeError):
    """Input data is malformed or violates an invariant."""


class CorpusFormatError(DataError):
    """A corpus file could not be parsed."""


class ValidationError(DataError):
    """A parsed value violates a corpus invariant."""


class ModelFormatError(DataError):
    """A model bundle is unreadable or has an unsupported version."""


class ConfigMismatchError(DataError):
    """A model bundle cannot be applied to the given input."""


class EmptyDatasetError(DataError):
    pass


class SmoteError(DataError):
    pass
