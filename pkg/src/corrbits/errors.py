"""Exception hierarchy shared across the package.

The CLI maps these to process exit codes: ValidationError -> 2,
ResourceCapError -> 3, InvariantViolation -> 4. Anything else is a bug.
"""


class CorrbitsError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(CorrbitsError):
    """Bad arguments, malformed files, or inconsistent configuration."""


class ResourceCapError(CorrbitsError):
    """Request exceeds a documented practicality cap (table sizes, k, n)."""


class InvariantViolation(CorrbitsError):
    """A property that must hold by construction was observed to fail."""
