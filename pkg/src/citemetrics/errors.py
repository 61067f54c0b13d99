"""Exception hierarchy shared across the package."""


class CitemetricsError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(CitemetricsError, ValueError):
    """Bad input data: domain violations, malformed files, contract breaches."""


class WorkspaceError(CitemetricsError, ValueError):
    """Workspace-level failures: duplicate datasets, missing entries, corruption."""


class FitConvergenceError(CitemetricsError, RuntimeError):
    """A numerical fit failed to converge within its iteration budget."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual
