"""Exception types shared across the toolkit.

The CLI maps these onto exit codes: ConfigError -> 2, DataError -> 3,
CheckFailure -> 4.
"""


class TriagesimError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(TriagesimError):
    """Invalid configuration value; message names the offending field."""


class DataError(TriagesimError):
    """Input data violates a schema or estimator precondition."""


class EstimationError(DataError):
    """A regression or test could not be computed (rank, clusters, ...)."""


class CheckFailure(TriagesimError):
    """A verification run (model-verify) did not pass."""
