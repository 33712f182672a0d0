class RefusedComputation(Exception):
    """The inputs are valid but the requested quantity is not computable exactly (or too costly)."""


class ValidationError(ValueError):
    """A problem document violates the input schema."""
