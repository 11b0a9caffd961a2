"""Exception hierarchy shared across the package."""


class DqnfoilError(Exception):
    """Base class for all package errors."""


class ConfigurationError(DqnfoilError, ValueError):
    """Invalid configuration value or malformed config file."""

    def __init__(self, message, key=None):
        self.key = key
        if key is not None:
            message = f"{key}: {message}"
        super().__init__(message)


class GeometryError(DqnfoilError):
    """A profile cannot be analysed (open, self-intersecting, degenerate)."""


class ConstraintViolation(DqnfoilError):
    """Attempt to move a control point that is fixed or clamped."""


class SolverError(DqnfoilError):
    """The panel system is singular or too ill-conditioned to trust."""

    def __init__(self, message, condition=None, polygon=None):
        self.condition = condition
        self.polygon = polygon
        super().__init__(message)


class XfoilError(DqnfoilError):
    """Base class for failures of the external XFOIL process."""


class XfoilSpawnError(XfoilError):
    pass


class XfoilTimeout(XfoilError):
    pass


class XfoilConvergenceError(XfoilError):
    pass


class XfoilProtocolError(XfoilError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"{message}: {line!r}"
        super().__init__(message)


class EnvStateError(DqnfoilError, RuntimeError):
    """Stepping an environment that already reached its terminal state."""


class DivergenceError(DqnfoilError, FloatingPointError):
    """Training loss became non-finite."""

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)
