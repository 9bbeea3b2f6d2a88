"""Exception types shared across the package."""


class DataError(ValueError):
    """Unusable input: bad file, schema mismatch, empty view, malformed cell."""


class InvariantError(AssertionError):
    """An internal structural invariant was violated (corrupt tree, bad counts)."""
