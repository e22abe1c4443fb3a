"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested quantity."""


class DegenerateStatisticError(ArithmeticError):
    """A statistic is undefined for the given data (e.g. zero variance)."""


class ParseError(ValueError):
    """Malformed citation input; carries the offending line when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SimulationError(RuntimeError):
    """A Monte Carlo replication failed; names the ``(n, r)`` cell."""

    def __init__(self, message, n, replication):
        self.n = n
        self.replication = replication
        super().__init__(f"n={n}, replication={replication}: {message}")


class DegenerateLawWarning(UserWarning):
    """The citation law leaves the regime h_n >= 1 at this sample size."""
