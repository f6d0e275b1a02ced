"""Exception and warning types shared across the package."""


class FluteError(Exception):
    """Base class for all package errors."""


class DomainError(FluteError, ValueError):
    """An argument lies outside the domain of a formula."""


class PrecisionError(FluteError, ArithmeticError):
    """The requested precision or exponent range cannot be honoured."""


class SchemaError(FluteError, ValueError):
    """A JSON document does not match the spec schema."""


class ValidationError(FluteError, ValueError):
    """A well-formed input violates a semantic invariant."""


class MismatchError(FluteError, ValueError):
    """Two surfaces that must share cuff data do not."""


class NotHyperbolicError(FluteError, ArithmeticError):
    """A group word has |trace| < 2, so it has no closed geodesic."""


class ResolutionError(FluteError, RuntimeError):
    """Every interval of a direction partition is mixed; refine the grid."""


class SearchFailure(FluteError, RuntimeError):
    """No twist candidate on the grid satisfies the horizon constraint."""


class CancellationWarning(UserWarning):
    """Attached to a signed sum that lost more than half its bits."""
