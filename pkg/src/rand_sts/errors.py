"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the domain of a function or test."""


class LengthError(ValueError):
    """Requested bit count does not fit the available data."""


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class ConfigError(ValueError):
    """Invalid generator, campaign or CLI configuration."""


class RecommendationWarning(UserWarning):
    """Input is accepted but below the recommended size for a test."""
