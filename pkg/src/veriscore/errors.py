"""Exception types shared across the package.

Two failure families are distinguished because they map to distinct
process exit codes in the command line interface: bad inputs or
configuration (exit 2) and numerical failures such as quadrature not
reaching its tolerance (exit 3).
"""


class VeriscoreError(Exception):
    """Base class for all package errors."""


class ValidationError(VeriscoreError):
    """Invalid input data, configuration, or arguments."""


class NumericError(VeriscoreError):
    """A numerical routine failed to reach its accuracy target."""
