"""Exception types shared across the package."""


class MrootError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(MrootError):
    """A base point lies outside the field's declared domain box."""


class AdmissibleConeError(MrootError):
    """A probe direction leaves the admissible cone (A <= 0 there)."""


class DegenerateMetricError(MrootError):
    """The Hessian of A in y is singular or not positive definite.

    Carries ``condition`` when an estimate of the condition number of the
    offending matrix is available.
    """

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class ConfigurationError(MrootError):
    """A run was requested with inconsistent or insufficient configuration
    (too few base points, rank-deficient direction fan, wrong degree)."""


class MetricFileError(MrootError):
    """A metric definition file failed to parse.

    ``line`` and ``column`` are 1-based positions of the offending token
    when known.
    """

    def __init__(self, message, line=None, column=None):
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column
