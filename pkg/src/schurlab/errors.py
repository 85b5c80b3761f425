"""Exception types shared across modules; the CLI maps them to exit codes."""


class CapExceeded(ValueError):
    """A desk-scale size cap was exceeded (CLI exit code 3)."""


class InvariantViolation(RuntimeError):
    """A computed object broke an invariant it must satisfy (CLI exit code 4)."""
