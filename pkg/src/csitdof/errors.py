"""Exception types shared across the package.

The CLI maps these onto exit codes: ``ScenarioError`` -> 1, any other
``PreconditionError`` -> 2.
"""


class DofError(Exception):
    """Base class for all package errors."""


class ScenarioError(DofError, ValueError):
    """A scenario or schedule file failed to parse or validate."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class PreconditionError(DofError, ValueError):
    """Inputs are well-formed but outside an operation's supported domain."""


class UnsupportedCaseError(PreconditionError):
    """No bound formula or achievability scheme covers the given input."""


class UnboundedRegionError(PreconditionError):
    """An H-polytope has a nonzero recession direction."""

    def __init__(self, direction):
        self.direction = tuple(direction)
        shown = ", ".join(str(c) for c in self.direction)
        super().__init__(f"region is unbounded along direction ({shown})")


class ScheduleError(PreconditionError):
    """A transmission schedule violates one or more legality rules."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "\n".join(f"  - {v}" for v in self.violations)
        super().__init__(f"invalid schedule:\n{lines}")
