class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class ShapeError(ValueError):
    """Matrix is not square or not Hermitian within tolerance."""


class NotPSDError(ValueError):
    """Operator has an eigenvalue below the clamping band."""


class UnsupportedRangeError(ValueError):
    pass


class BudgetExceededError(RuntimeError):
    """Enumeration or dimension budget exceeded."""


class BracketError(RuntimeError):
    """Threshold search found no sign change on its bracket."""


class DegeneracyResolutionError(RuntimeError):
    """Joint eigenvalues could not be snapped to integers."""


KEY_RATE_ERRORS = (
    DomainError,
    ShapeError,
    NotPSDError,
    UnsupportedRangeError,
    BudgetExceededError,
    BracketError,
    DegeneracyResolutionError,
)


def exit_code(exc: Exception) -> int:
    if isinstance(exc, BudgetExceededError):
        return 4
    if isinstance(exc, (BracketError, DegeneracyResolutionError)):
        return 3
    return 2


def http_status(exc: Exception) -> int:
    if isinstance(exc, BudgetExceededError):
        return 413
    if isinstance(exc, (BracketError, DegeneracyResolutionError)):
        return 422
    return 400
