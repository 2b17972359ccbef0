"""Exception hierarchy.

Validation errors also derive from ``ValueError`` so callers that only care
about bad input can catch the builtin.
"""


class QuadhamError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(QuadhamError, ValueError):
    """Bad input: the CLI maps these to exit code 2."""


class DegreeOverflow(ValidationError):
    pass


class InhomogeneousHamiltonian(ValidationError):
    pass


class NonClosure(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class InvalidParam(ValidationError):
    pass


class UnsupportedDimension(ValidationError):
    pass


class NotAvailable(ValidationError):
    pass


class BracketInvalid(ValidationError):
    pass


class ConvergenceFailure(QuadhamError):
    """Numerical routine failed; carries diagnostics in ``details``."""

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details


class NotDefective(QuadhamError):
    pass


class IllConditioned(QuadhamError):
    pass


class UnsupportedJordanStructure(QuadhamError, NotImplementedError):
    pass


class NotApplicable(QuadhamError):
    pass


class DegenerateSigma(QuadhamError):
    pass


class LadderIdentityError(QuadhamError):
    """The rewritten Hamiltonian left a non-constant remainder."""
