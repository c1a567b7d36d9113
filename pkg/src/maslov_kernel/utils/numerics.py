"""
Numerical helpers shared by the kernel, caustic and oracle modules.
"""

import warnings
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy.integrate import IntegrationWarning, quad

from ..errors import InvalidInputError, QuadratureError


@dataclass(frozen=True)
class QuadResult:
    """Value of a complex integral and its estimated absolute error."""

    value: complex
    error: float


def complex_quad(
    integrand: Callable[[float], complex],
    lower: float,
    upper: float,
    epsabs: float = 1e-10,
    epsrel: float = 1e-10,
    limit: int = 200,
) -> QuadResult:
    """
    Adaptive Gauss–Kronrod quadrature of a complex integrand on [lower, upper].

    Real and imaginary parts are integrated separately with scipy's QUADPACK
    wrapper.

    Raises:
        QuadratureError: If QUADPACK reports that the tolerance was not met
    """
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", IntegrationWarning)
            real, real_err = quad(
                lambda t: complex(integrand(t)).real,
                lower,
                upper,
                epsabs=epsabs,
                epsrel=epsrel,
                limit=limit,
            )
            imag, imag_err = quad(
                lambda t: complex(integrand(t)).imag,
                lower,
                upper,
                epsabs=epsabs,
                epsrel=epsrel,
                limit=limit,
            )
    except IntegrationWarning as e:
        raise QuadratureError(
            f"Quadrature on [{lower:.6g}, {upper:.6g}] did not converge: {e}",
            estimated_error=float("nan"),
            interval=(lower, upper),
        ) from e
    return QuadResult(value=complex(real, imag), error=float(np.hypot(real_err, imag_err)))


def arctan_deficit(a: float) -> float:
    """
    a − arctan(a) without cancellation.

    Below 0.1 the alternating series a³/3 − a⁵/5 + ... is summed to 1e−17
    relative accuracy.
    """
    if abs(a) >= 0.1:
        return a - float(np.arctan(a))
    a_sq = a * a
    power = a * a_sq
    total = 0.0
    for k in range(1, 10):
        total += (-1) ** (k + 1) * power / (2 * k + 1)
        power *= a_sq
    return total


def twice_sigma_argument(omega_time: float, n: int) -> tuple[float, float, float]:
    """
    sin and cos of 2·n·arctan(ωT/2n), plus the deficit n·(a − arctan a).

    Uses 2·n·arctan(a) = ωT − 2·deficit and angle addition, so the sine keeps
    its relative accuracy next to the zeros ωT = Mπ.

    Returns:
        (sine, cosine, deficit)
    """
    deficit = n * arctan_deficit(omega_time / (2.0 * n))
    sin_wt, cos_wt = float(np.sin(omega_time)), float(np.cos(omega_time))
    sin_d, cos_d = float(np.sin(2.0 * deficit)), float(np.cos(2.0 * deficit))
    return sin_wt * cos_d - cos_wt * sin_d, cos_wt * cos_d + sin_wt * sin_d, deficit


def log_log_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log y against log x."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape[0] < 2 or x.shape != y.shape:
        raise InvalidInputError("Need at least two (x, y) pairs of equal length")
    if np.any(x <= 0) or np.any(y <= 0):
        raise InvalidInputError("log-log fit needs strictly positive data")
    slope, _ = np.polyfit(np.log(x), np.log(y), 1)
    return float(slope)


def neville_table(
    nodes: Sequence[float], values: Sequence[complex], at: float = 0.0
) -> npt.NDArray[np.complex128]:
    """
    Neville's scheme for the interpolating polynomial evaluated at `at`.

    Row i holds the extrapolants built from the first i+1 nodes: entry [i, j]
    uses nodes i−j..i. The last diagonal entry is the full-degree estimate.
    """
    x = np.asarray(nodes, dtype=float)
    n = x.shape[0]
    if n == 0 or len(values) != n:
        raise InvalidInputError("Neville table needs matching, non-empty nodes and values")
    table = np.zeros((n, n), dtype=complex)
    table[:, 0] = np.asarray(values, dtype=complex)
    for i in range(1, n):
        for j in range(1, i + 1):
            numerator = (at - x[i - j]) * table[i, j - 1] - (at - x[i]) * table[i - 1, j - 1]
            table[i, j] = numerator / (x[i] - x[i - j])
    return table


def unwrap_phases(phases: Sequence[float]) -> npt.NDArray[np.float64]:
    """Remove 2π jumps so that consecutive phases differ by less than π."""
    return np.unwrap(np.asarray(phases, dtype=float))
