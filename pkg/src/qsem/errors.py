"""Exception hierarchy shared across the package.

Three broad classes matter to callers (and to the CLI exit-code mapping):
usage/config problems, bad data (files, unknown names, malformed queries),
and numeric failures (non-convergence, violated matrix preconditions).
"""


class QsemError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(QsemError, ValueError):
    """Operands have incompatible dimensions or shapes."""


class NonHermitianError(QsemError, ValueError):
    """A matrix required to be self-adjoint is not, beyond tolerance."""


class NumericError(QsemError, ValueError):
    """A numeric precondition failed (normalization, positivity, ...)."""


class ConvergenceError(QsemError, RuntimeError):
    """An iterative routine failed to reach its stopping criterion."""


class DegenerateTensorError(QsemError, ValueError):
    """A tensor operation received an all-zero tensor."""


class ParseError(QsemError, ValueError):
    """A query string does not conform to the query grammar."""


class UnknownTermError(QsemError, LookupError):
    """A term (or other name) is absent from the vocabulary/index."""


class DataFormatError(QsemError, ValueError):
    """A data file is malformed or corrupt."""


class VersionError(DataFormatError):
    """A persisted file carries an unknown magic string or version."""


class ChecksumError(DataFormatError):
    """A persisted file's payload does not match its checksum."""


class ConfigError(QsemError, ValueError):
    """A configuration file or value is invalid."""
