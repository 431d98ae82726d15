"""Exception hierarchy.

``InputError`` subclasses map to CLI exit code 2, ``ComputationError``
subclasses to exit code 1.
"""


class CitepathsError(Exception):
    pass


class InputError(CitepathsError):
    pass


class IngestError(InputError):
    """Malformed or inconsistent corpus input."""


class EmptyCorpusError(IngestError):
    pass


class CacheFormatError(InputError):
    pass


class DomainError(InputError, ValueError):
    """Arguments outside an operation's domain (mismatched universes, bad k)."""


class ComputationError(CitepathsError):
    pass


class ConvergenceError(ComputationError):
    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class ConfigurationError(ComputationError):
    pass


class DegenerateInputError(ComputationError):
    pass
