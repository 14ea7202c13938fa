"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: input/validation problems exit 2,
out-of-scope singularity structure exits 3, numerical non-convergence
exits 4.
"""


class GFAsymError(Exception):
    """Base class for all errors raised by this package."""


class PolyParseError(GFAsymError, ValueError):
    """Malformed polynomial text, rational literal, or record data."""


LAURENT_HINT = (
    "negative exponents are not supported: multiply both numerator and "
    "denominator by the monomial that clears every negative power and "
    "reindex the coefficient array accordingly, then retry"
)


class ValidationError(GFAsymError, ValueError):
    """Inputs that parse but violate a documented precondition."""


class DirectionMismatchError(ValidationError):
    """The supplied direction is not the one the point actually governs."""


class OutOfScopeError(GFAsymError):
    """Singularity structure this package deliberately does not expand.

    ``kind`` is one of ``"non_simple"``, ``"toral"``, ``"not_minimal"``,
    ``"non_isolated"``.
    """

    def __init__(self, message, kind):
        super().__init__(message)
        self.kind = kind


class NonConvergenceError(GFAsymError):
    """An iterative numerical procedure failed to reach its tolerance."""


class NoConvergentStartError(NonConvergenceError):
    """No Newton start produced a certified solution."""


class BranchTrackingError(NonConvergenceError):
    """Root continuation could not follow a single sheet of the variety."""
