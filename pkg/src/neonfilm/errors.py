"""Exception types raised by the twin. All are ValueError subclasses so callers
can catch broadly; the CLI maps ScenarioError to exit code 2 and everything
else unexpected to 3."""


class NeonFilmError(ValueError):
    """Base class for domain errors."""


class BranchDomainError(NeonFilmError):
    """Saturation-pressure branch evaluated outside its validity range."""


class CalibrationError(NeonFilmError):
    """A calibration system has no admissible solution."""


class ScenarioError(NeonFilmError):
    """Malformed scenario or campaign description. Carries a field path."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class CommandError(NeonFilmError):
    """Rejected live command (out-of-range argument or bad sequencing)."""


class ShiftRangeError(NeonFilmError):
    """Fractional shift outside the invertible participation range."""
