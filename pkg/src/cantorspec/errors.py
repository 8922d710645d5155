"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument falls outside an operation's stated domain."""


class InconsistencyError(RuntimeError):
    """Two routes that must agree produced different answers.

    Raised when a fast rule contradicts the exhaustive cycle search, when a
    witness cycle fails re-validation, or when a cached record does not
    survive re-verification.  This should never happen; it indicates a bug
    or a corrupted cache, so it is kept distinct from DomainError.
    """
