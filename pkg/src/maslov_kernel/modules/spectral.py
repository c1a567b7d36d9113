"""
Spectrum of the fluctuation matrix and Maslov index classification.

The eigenvalues of the tridiagonal matrix A are known in closed form,

    λ_k = 2(α − β cos(kπ/N)) = 4cos²(kπ/2N)(tan²(kπ/2N) − ω²Δt²/4),

so λ_k < 0 exactly when k < x_0(N) = (2N/π)·arctan(ωT/2N). The number of
negative eigenvalues tends to M = floor(ωT/π) away from caustics and to M − 1
at a caustic ωT = Mπ; that limit count is the Maslov index L.

An independent Sturm-sequence bisection solver is provided to cross-check the
closed form without relying on it.
"""

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..errors import (
    DegenerateSpectrumError,
    InvalidInputError,
    NumericalError,
    SpectrumTooCoarseError,
)
from ..model.oscillator import Discretization, OscillatorConfig
from ..utils.notifications import notification_manager
from ..utils.numerics import twice_sigma_argument
from .lattice_action import DiscreteAction, build_action

CAUSTIC_TOL = 1e-9
DEGENERATE_EIGENVALUE = 1e-300
MAX_STABILIZATION_STEPS = 2**24


@dataclass(frozen=True)
class Spectrum:
    """Classified spectrum of A at one (config, N)."""

    steps: int
    eigenvalues: npt.NDArray[np.float64]
    zero_crossing: float
    negative_count: int
    m_index: int
    maslov_l: int
    at_caustic: bool
    count_stable: bool


@dataclass(frozen=True)
class EigenvectorView:
    """Normalized eigenvector v_k with (v_k)_l = sqrt(2/N)·sin(lkπ/N)."""

    index: int
    steps: int

    @property
    def entries(self) -> npt.NDArray[np.float64]:
        rows = np.arange(1, self.steps)
        return math.sqrt(2.0 / self.steps) * np.sin(
            rows * self.index * math.pi / self.steps
        )


@dataclass(frozen=True)
class LogProduct:
    """A product of reals as log|product| plus its sign."""

    log_magnitude: float
    sign: int
    negative_count: int

    @property
    def value(self) -> float:
        """Only safe when the magnitude fits a double."""
        return self.sign * math.exp(self.log_magnitude)


def caustic_classification(
    config: OscillatorConfig, caustic_tol: float = CAUSTIC_TOL
) -> tuple[bool, int]:
    """
    Decide whether ωT sits on a caustic.

    Returns:
        (at_caustic, M) where M is the nearest integer to ωT/π at a caustic and
        floor(ωT/π) otherwise. The free particle is never caustic.
    """
    if config.is_free:
        return False, 0
    ratio = config.half_periods
    nearest = round(ratio)
    if nearest >= 1 and abs(ratio - nearest) < caustic_tol:
        return True, nearest
    return False, math.floor(ratio)


def _half_angles(disc: Discretization) -> npt.NDArray[np.float64]:
    return np.arange(1, disc.steps) * math.pi / (2.0 * disc.steps)


def eigenvalues_trigonometric_form(
    config: OscillatorConfig, disc: Discretization
) -> npt.NDArray[np.float64]:
    """
    λ_k = 4sin²(kπ/2N) − (ω²Δt²)cos²(kπ/2N), ascending in k.

    This arrangement has no cancellation between α and β cos(kπ/N), so
    eigenvalues close to zero keep their relative accuracy.
    """
    if disc.steps < 2:
        raise InvalidInputError(f"N must be at least 2, got {disc.steps}")
    half = _half_angles(disc)
    quarter = (config.omega * disc.delta_t) ** 2 / 4.0
    return 4.0 * np.sin(half) ** 2 - 4.0 * quarter * np.cos(half) ** 2


def eigenvalues_closed_form(
    config: OscillatorConfig, disc: Discretization
) -> npt.NDArray[np.float64]:
    """
    λ_k = 2(α − β cos(kπ/N)), k = 1..N−1.

    Raises:
        NumericalError: If the value disagrees with the trigonometric form
    """
    action = build_action(config, disc)
    angles = np.arange(1, disc.steps) * math.pi / disc.steps
    values = 2.0 * (action.alpha - action.beta * np.cos(angles))

    reference = eigenvalues_trigonometric_form(config, disc)
    tolerance = 1e-12 * max(1.0, 2.0 * action.beta)
    worst = float(np.max(np.abs(values - reference)))
    if worst > tolerance:
        raise NumericalError(
            f"Closed-form eigenvalue forms disagree by {worst:.3e} (tolerance {tolerance:.1e})"
        )
    return values


def eigenvector(disc: Discretization, k: int) -> EigenvectorView:
    """
    Raises:
        InvalidInputError: If k is outside 1..N−1
    """
    if not 1 <= k <= disc.steps - 1:
        raise InvalidInputError(f"Eigenvector index k={k} outside 1..{disc.steps - 1}")
    return EigenvectorView(index=k, steps=disc.steps)


def zero_crossing(config: OscillatorConfig, disc: Discretization) -> float:
    """
    x_0(N) = (2N/π)·arctan(ωT/2N).

    Raises:
        InvalidInputError: If ω = 0 (all eigenvalues are positive, no crossing)
    """
    if config.is_free:
        raise InvalidInputError("omega = 0 has no zero crossing: every eigenvalue is positive")
    n = disc.steps
    return 2.0 * n / math.pi * math.atan(config.omega_time / (2.0 * n))


def classify(
    config: OscillatorConfig,
    disc: Discretization,
    caustic_tol: float = CAUSTIC_TOL,
    strict: bool = True,
) -> Spectrum:
    """
    Count negative eigenvalues and derive the Maslov index.

    Args:
        config: Oscillator parameters
        disc: Time lattice
        caustic_tol: ωT/π counts as integral within this distance
        strict: Raise when the finite-N count has not reached L yet; otherwise
            return the spectrum with count_stable=False

    Raises:
        SpectrumTooCoarseError: If strict and the negative count differs from L
        NumericalError: If the sign count and floor(x_0(N)) disagree
    """
    at_caustic, m_index = caustic_classification(config, caustic_tol)
    maslov_l = m_index - 1 if at_caustic else m_index

    eigenvalues = eigenvalues_trigonometric_form(config, disc)
    negative_count = int(np.count_nonzero(eigenvalues < 0.0))

    if config.is_free:
        crossing = 0.0
    else:
        crossing = zero_crossing(config, disc)
        if not at_caustic and abs(crossing - round(crossing)) > 1e-9:
            if math.floor(crossing) != negative_count:
                raise NumericalError(
                    f"Sign count {negative_count} disagrees with floor(x0)={math.floor(crossing)} "
                    f"at N={disc.steps}"
                )

    count_stable = negative_count == maslov_l
    notification_manager.debug(
        f"[Spectral] N={disc.steps}: x0={crossing:.12g}, negatives={negative_count}, "
        f"M={m_index}, L={maslov_l}, caustic={at_caustic}"
    )
    if not count_stable and strict:
        raise SpectrumTooCoarseError(
            f"N too small: {negative_count} negative eigenvalues at N={disc.steps}, "
            f"expected L={maslov_l}; increase N",
            steps=disc.steps,
            negative_count=negative_count,
            expected=maslov_l,
        )

    return Spectrum(
        steps=disc.steps,
        eigenvalues=eigenvalues,
        zero_crossing=crossing,
        negative_count=negative_count,
        m_index=m_index,
        maslov_l=maslov_l,
        at_caustic=at_caustic,
        count_stable=count_stable,
    )


def _negative_count_at(config: OscillatorConfig, steps: int) -> int:
    disc = Discretization(steps=steps, time=config.time)
    return int(np.count_nonzero(eigenvalues_trigonometric_form(config, disc) < 0.0))


def stabilization_steps(
    config: OscillatorConfig,
    caustic_tol: float = CAUSTIC_TOL,
    max_steps: int = MAX_STABILIZATION_STEPS,
) -> int:
    """
    Smallest N ≥ 2 whose negative count equals the Maslov index L.

    The count is non-decreasing in N (x_0(N) increases monotonically), so the
    answer is bracketed by doubling and then located by bisection.

    Raises:
        NumericalError: If the count has not settled by max_steps
    """
    at_caustic, m_index = caustic_classification(config, caustic_tol)
    target = m_index - 1 if at_caustic else m_index
    if target <= 0:
        return 2

    upper = 2
    while _negative_count_at(config, upper) < target:
        if upper >= max_steps:
            raise NumericalError(
                f"Negative count still below L={target} at N={upper}; ωT is too close to a caustic"
            )
        upper *= 2
    lower = max(2, upper // 2)
    if _negative_count_at(config, lower) >= target:
        return lower
    while upper - lower > 1:
        middle = (lower + upper) // 2
        if _negative_count_at(config, middle) >= target:
            upper = middle
        else:
            lower = middle
    notification_manager.debug(f"[Spectral] Negative count reaches L={target} at N={upper}")
    return upper


def sturm_count(
    diagonal: npt.ArrayLike, off_diagonal: npt.ArrayLike, shifts: npt.ArrayLike
) -> npt.NDArray[np.int64]:
    """
    Number of eigenvalues strictly below each shift.

    Counts the negative pivots of the LDLᵀ factorization of T − x·I, which by
    Sylvester's law of inertia equals the number of eigenvalues below x.
    """
    d = np.asarray(diagonal, dtype=float)
    e = np.asarray(off_diagonal, dtype=float)
    x = np.atleast_1d(np.asarray(shifts, dtype=float))
    if e.shape[0] != max(d.shape[0] - 1, 0):
        raise InvalidInputError(
            f"Off-diagonal of length {e.shape[0]} does not fit diagonal of length {d.shape[0]}"
        )
    e_squared = e**2
    pivmin = np.finfo(float).tiny * max(1.0, float(np.max(e_squared, initial=0.0)))

    counts = np.zeros(x.shape, dtype=np.int64)
    pivot = d[0] - x
    pivot = np.where(np.abs(pivot) < pivmin, -pivmin, pivot)
    counts += pivot < 0
    for i in range(1, d.shape[0]):
        pivot = d[i] - x - e_squared[i - 1] / pivot
        pivot = np.where(np.abs(pivot) < pivmin, -pivmin, pivot)
        counts += pivot < 0
    return counts


def sturm_bisection(
    diagonal: npt.ArrayLike,
    off_diagonal: npt.ArrayLike,
    max_iterations: int = 200,
) -> npt.NDArray[np.float64]:
    """
    All eigenvalues of a symmetric tridiagonal matrix by Sturm bisection.

    Every eigenvalue is bisected simultaneously inside the Gershgorin interval
    until its bracket shrinks to a few ulps.

    Returns:
        Eigenvalues in ascending order
    """
    d = np.asarray(diagonal, dtype=float)
    e = np.asarray(off_diagonal, dtype=float)
    n = d.shape[0]
    if n == 0:
        raise InvalidInputError("Empty matrix has no eigenvalues")
    if n == 1:
        return d.copy()

    radius = np.zeros(n)
    radius[:-1] += np.abs(e)
    radius[1:] += np.abs(e)
    low_bound = float(np.min(d - radius))
    high_bound = float(np.max(d + radius))
    scale = max(abs(low_bound), abs(high_bound), np.finfo(float).tiny)

    lower = np.full(n, low_bound)
    upper = np.full(n, high_bound)
    rank = np.arange(1, n + 1)
    tolerance = 4.0 * np.finfo(float).eps * scale

    for _ in range(max_iterations):
        if float(np.max(upper - lower)) <= tolerance:
            break
        middle = 0.5 * (lower + upper)
        below = sturm_count(d, e, middle) >= rank
        upper = np.where(below, middle, upper)
        lower = np.where(below, lower, middle)
    return 0.5 * (lower + upper)


def eigenvalues_numeric(action: DiscreteAction) -> npt.NDArray[np.float64]:
    """Eigenvalues of A from the Sturm solver, independent of the closed form."""
    if action.size < 1:
        raise InvalidInputError("Matrix dimension must be at least 1")
    diagonal = np.full(action.size, action.diagonal)
    off_diagonal = np.full(action.size - 1, action.off_diagonal)
    return sturm_bisection(diagonal, off_diagonal)


def abs_eigenvalue_product(config: OscillatorConfig, disc: Discretization) -> LogProduct:
    """
    Σ log|λ_k| together with the sign (−1)^(number of negatives).

    Raises:
        DegenerateSpectrumError: If some |λ_k| is numerically zero
    """
    eigenvalues = eigenvalues_trigonometric_form(config, disc)
    magnitudes = np.abs(eigenvalues)
    smallest = float(np.min(magnitudes))
    if smallest < DEGENERATE_EIGENVALUE:
        raise DegenerateSpectrumError(
            f"Eigenvalue of magnitude {smallest:.3e} at N={disc.steps}: determinant vanishes"
        )
    negatives = int(np.count_nonzero(eigenvalues < 0.0))
    return LogProduct(
        log_magnitude=float(np.sum(np.log(magnitudes))),
        sign=-1 if negatives % 2 else 1,
        negative_count=negatives,
    )


def determinant_closed_form(config: OscillatorConfig, disc: Discretization) -> LogProduct:
    """
    det A = (N/ωT)·Im σ(N)² in log-magnitude form.

    With a = ωT/2N, |σ|² = (1 + a²)^N and arg σ = N·arctan(a), so
    log|det A| = log N − log ωT + N·log1p(a²) + log|sin(2N·arctan a)|.
    The free particle gives det A = N.
    """
    n = disc.steps
    if config.is_free:
        return LogProduct(log_magnitude=math.log(n), sign=1, negative_count=0)
    a = config.omega_time / (2.0 * n)
    twice_arg = 2.0 * n * math.atan(a)
    sine, _, _ = twice_sigma_argument(config.omega_time, n)
    if abs(sine) < DEGENERATE_EIGENVALUE:
        raise DegenerateSpectrumError(f"Im σ² vanishes at N={n}")
    log_magnitude = (
        math.log(n) - math.log(config.omega_time) + n * math.log1p(a * a) + math.log(abs(sine))
    )
    # sin(2·arg σ) changes sign once per eigenvalue crossing zero.
    negatives = max(0, math.ceil(twice_arg / math.pi) - 1)
    return LogProduct(
        log_magnitude=log_magnitude,
        sign=1 if sine > 0 else -1,
        negative_count=negatives,
    )
