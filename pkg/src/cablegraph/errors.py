"""Exception types shared across the package."""


class CableGraphError(Exception):
    """Base class for all package-specific errors."""


class UnknownCableError(CableGraphError):
    """A cable id that is not live in the diagram."""


class EmptyWorkspaceError(CableGraphError):
    """An operation that needs at least one live cable got none."""


class UnknownKnotError(CableGraphError):
    """A knot class name with no registered generator."""


class MCDParseError(CableGraphError):
    """Malformed MCD text.  Carries the offending line and column (1-based)."""

    def __init__(self, line: int, column: int, reason: str):
        self.line = line
        self.column = column
        self.reason = reason
        super().__init__(f"line {line}, column {column}: {reason}")


class InvalidDiagramError(CableGraphError):
    """A structurally parseable diagram that violates a model invariant."""

    def __init__(self, report):
        self.report = report
        detail = "; ".join(v.message for v in report.violations)
        super().__init__(f"invalid diagram: {detail}")


class StaleActionError(CableGraphError):
    """An action referencing graph elements that no longer exist."""


class MovePreconditionError(CableGraphError):
    """A move whose precondition does not hold in the given diagram."""


class StuckError(CableGraphError):
    """The planner found no applicable action on a non-goal diagram."""
