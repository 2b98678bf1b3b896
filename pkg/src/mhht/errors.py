"""Exception types shared across the toolkit."""


class ValidationError(ValueError):
    """An input violates a documented precondition or invariant."""


class InsufficientExtrema(RuntimeError):
    """Too few extrema to build envelopes; callers treat this as sifting termination."""
