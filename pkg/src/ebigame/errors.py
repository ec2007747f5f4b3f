"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the mathematical domain of an operation."""


class ConfigurationError(ValueError):
    """A run parameter (grid size, step count, cap) is unusable."""


class ValidationError(ValueError):
    """One or more scenario fields failed validation.

    ``errors`` holds ``(field_path, message)`` pairs, all of them, not just the
    first one encountered.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        lines = [f"{path}: {msg}" for path, msg in self.errors]
        super().__init__("scenario validation failed:\n  " + "\n  ".join(lines))


class ScenarioParseError(ValueError):
    """The scenario file is not well-formed text."""

    def __init__(self, message, line=None):
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{message}{where}")
