"""Exception types shared across the package."""


class NumericalError(RuntimeError):
    """A matrix operation or filter step failed numerically."""


class ConvergenceError(NumericalError):
    """An iterative computation did not converge within its budget."""


class SequencingError(ValueError):
    """Measurement timestamps are not strictly increasing."""


class ConfigError(ValueError):
    """A configuration document is malformed or contains unknown keys."""
