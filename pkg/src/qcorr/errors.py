"""Exception types shared across the package."""


class UsageError(ValueError):
    """Bad arguments: wrong shapes, out-of-range parameters, unknown names."""


class NumericError(ArithmeticError):
    """A numerical contract was violated (non-Hermitian input, negative entropy, ...)."""
