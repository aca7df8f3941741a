"""Exception types shared across the package."""


class InputError(ValueError):
    """Invalid caller-supplied input (bad arguments, malformed files)."""


class UnsupportedConstructionError(InputError):
    """A construction that is only defined for part of the parameter space."""


class InvariantError(RuntimeError):
    """An internal consistency check failed; indicates a bug, not bad input."""
