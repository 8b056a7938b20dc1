"""Error taxonomy shared across the package.

The CLI maps these onto process exit codes, so keep the hierarchy flat:
anything user-fixable in flags is a ConfigError, anything wrong with the
input files is a DataError, anything that broke numerically is a
NumericalError.
"""


class ParedError(Exception):
    """Base class for all package errors."""


class ConfigError(ParedError):
    """Invalid run configuration (bad flags, bounds, budgets)."""

    exit_code = 2


class DataError(ParedError):
    """Unusable input data (missing files, bad cells, shape mismatches)."""

    exit_code = 3


class NumericalError(ParedError):
    """A computation failed in a way no retry will fix."""

    exit_code = 4
