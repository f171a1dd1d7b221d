"""Error types shared across the package.

The CLI maps these onto process exit codes, so library code should raise
the most specific one that applies.
"""


class GameError(ValueError):
    """Invalid game definition or action profile."""


class LearnerError(ValueError):
    """Invalid learner construction, spec string, or update protocol."""


class ConfigError(ValueError):
    """Invalid run configuration (bad flags, unknown game, malformed spec)."""


class NumericError(RuntimeError):
    """A numeric routine failed to meet its tolerance.

    Carries the achieved residual so callers can report how close it got.
    """

    def __init__(self, message: str, residual: float | None = None):
        if residual is not None:
            message = f"{message} (residual={residual:.3e})"
        super().__init__(message)
        self.residual = residual
