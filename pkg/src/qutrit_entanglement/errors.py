"""Exception types raised by the library."""


class QutritError(Exception):
    """Base class for all errors raised by this package."""


class NotHermitian(QutritError, ValueError):
    pass


class BadDimension(QutritError, ValueError):
    pass


class CaseMismatch(QutritError, ValueError):
    pass


class NonPositiveTemperature(QutritError, ValueError):
    pass


class InvalidDensityMatrix(QutritError, ValueError):
    """Raised when an input fails a density-matrix check.

    ``check`` names the failing test: ``"shape"``, ``"hermitian"``,
    ``"trace"`` or ``"positive"``.
    """

    def __init__(self, check: str, message: str):
        super().__init__(message)
        self.check = check


class NotBracketed(QutritError, ValueError):
    """The detector does not change side between the two temperatures."""

    def __init__(self, message: str, t_lo: float, t_hi: float, value_lo: float, value_hi: float):
        super().__init__(message)
        self.t_lo = t_lo
        self.t_hi = t_hi
        self.value_lo = value_lo
        self.value_hi = value_hi


class SweepPointError(QutritError):
    """Wraps a failure at one grid point, carrying its coordinates."""

    def __init__(self, index: tuple[int, ...], values: dict[str, float], cause: Exception):
        super().__init__(f"sweep point {index} {values}: {cause}")
        self.index = index
        self.values = values
        self.cause = cause
