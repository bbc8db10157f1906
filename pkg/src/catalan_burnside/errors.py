"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """An argument violates the documented precondition of an operation."""


class ResourceLimitError(RuntimeError):
    """A request exceeds a hard size cap (enumeration or exact evolution)."""
