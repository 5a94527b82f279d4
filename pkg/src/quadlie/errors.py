"""Exception types raised by quadlie."""


class QuadlieError(Exception):
    """Base class for all library errors."""


class StructuralError(QuadlieError, ValueError):
    """Matrices of incompatible shape were combined."""


class DegeneracyError(QuadlieError, ArithmeticError):
    """Eigenvalues (or roots) are too close for a divided-difference formula."""


class SingularityError(QuadlieError, ArithmeticError):
    """A pivot required by an ordered factorization vanished."""

    def __init__(self, message, t=None):
        super().__init__(message if t is None else f"{message} (t={t!r})")
        self.t = t


class CapacityError(QuadlieError, ValueError):
    """A truncated Fock basis would exceed the configured dimension cap."""


class ModelError(QuadlieError, ValueError):
    """A model specification is invalid for the requested operation."""
