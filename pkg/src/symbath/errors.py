"""Exception types shared by the package."""


class ValidationError(ValueError):
    """An input violates a documented constraint."""


class DegenerateParametersError(ValidationError):
    """Parameters accepted for building a generator but not for asymptotics."""


class ConvergenceError(RuntimeError):
    """Propagation did not settle; ``residual`` holds the last max-abs change."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual
