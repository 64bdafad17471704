"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration value or file."""


class DomainError(ValueError):
    """Coordinate outside a model's declared domain, or invalid field value."""


class ContractViolation(RuntimeError):
    """An operation was called out of order or more than once per step."""


class StabilityError(RuntimeError):
    """The field became non-finite during time stepping."""

    def __init__(self, message: str, step: int, max_abs: float):
        super().__init__(message)
        self.step = step
        self.max_abs = max_abs
