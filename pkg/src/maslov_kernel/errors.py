"""
Exception hierarchy for maslov-kernel.

Invalid inputs and numerical failures are kept apart so that the CLI can map
them to distinct exit codes (2 and 3).
"""


class MaslovKernelError(Exception):
    """Base class for every error raised by the package."""


class InvalidInputError(MaslovKernelError, ValueError):
    """Raised when arguments violate a precondition (shape, range, endpoints)."""


class NumericalError(MaslovKernelError):
    """Raised when a computation cannot deliver a trustworthy number."""


class CausticProximityError(NumericalError):
    """The requested time sits on (or too close to) a caustic ωT = Mπ."""

    def __init__(self, message: str, m_index: int):
        super().__init__(message)
        self.m_index = m_index


class SpectrumTooCoarseError(NumericalError):
    """The finite-N negative count disagrees with the asymptotic classification."""

    def __init__(self, message: str, steps: int, negative_count: int, expected: int):
        super().__init__(message)
        self.steps = steps
        self.negative_count = negative_count
        self.expected = expected


class DegenerateSpectrumError(NumericalError):
    """An eigenvalue is numerically zero, so the determinant vanishes."""


class QuadratureError(NumericalError):
    """Adaptive quadrature failed to meet its tolerance."""

    def __init__(
        self, message: str, estimated_error: float, interval: tuple[float, float]
    ):
        super().__init__(message)
        self.estimated_error = estimated_error
        self.interval = interval


class ExtrapolationError(NumericalError):
    """Richardson extrapolation in the damping parameter did not settle."""

    def __init__(self, message: str, residuals: list[float]):
        super().__init__(message)
        self.residuals = residuals


class ExpansionTruncationError(NumericalError):
    """The eigenfunction expansion was cut before its tail became negligible."""

    def __init__(self, message: str, tail_weight: float):
        super().__init__(message)
        self.tail_weight = tail_weight
