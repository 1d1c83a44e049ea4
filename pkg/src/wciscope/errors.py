"""Exception types raised across the package."""


class WCIError(ValueError):
    """Base class for invalid input to any wciscope operation."""


class StructuralError(WCIError):
    """Arity, length or field mismatch between objects that must agree."""


class NotWellFormedError(WCIError):
    """An operation that needs a well formed weighted projective space got one that is not."""


class InfeasibleError(WCIError):
    """A requested exhaustive computation exceeds its size limit."""
