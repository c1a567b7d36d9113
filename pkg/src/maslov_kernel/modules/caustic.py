"""
Distributional evaluation of the kernel at a caustic ωT = Mπ.

Near a caustic σ(N) has argument Mπ/2 − ε(N) with ε(N) → 0, and
z(N) = σ̄/σ = (−1)^M·exp(2iε(N)) approaches ±1. In the coordinates

    u = sqrt(mω/2ħ)(x_I + x_F),  v = sqrt(mω/2ħ)(x_I − x_F)

the finite-N kernel separates into a factor exp(−v²/(1 − z)) (even M) or
exp(−u²/(1 + z)) (odd M) that becomes a nascent delta function as N grows, so
that K_N → exp(−iMπ/2)·δ(x_F − (−1)^M x_I) when integrated against a test
function.
"""

import cmath
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

from ..errors import InvalidInputError, NumericalError
from ..model.kernel_value import CausticDelta
from ..model.oscillator import Discretization, GaussianPacket, OscillatorConfig
from ..utils.notifications import notification_manager
from ..utils.numerics import complex_quad, log_log_slope
from .kernel import continuum_gaussian_kernel, discrete_gaussian_kernel, sigma
from .spectral import CAUSTIC_TOL, caustic_classification, classify

TRUNCATION_SIGMAS = 8.0
DEFAULT_DELTA_TOLERANCE = 1e-3


@dataclass(frozen=True)
class CausticState:
    """z(N) and ε(N) at a caustic of index M."""

    m_index: int
    steps: int
    epsilon: float

    @property
    def even(self) -> bool:
        return self.m_index % 2 == 0

    @property
    def z(self) -> complex:
        """(−1)^M·exp(2iε), on the unit circle by construction."""
        return (1 if self.even else -1) * cmath.exp(2j * self.epsilon)

    @property
    def leading_order_epsilon(self) -> float:
        """(Mπ/2)³/(3N²), the first term of the large-N expansion."""
        return (self.m_index * math.pi / 2.0) ** 3 / (3.0 * self.steps**2)

    def _small(self) -> complex:
        """The one of 1 ∓ z that vanishes: 2 sin ε·exp(−i(π/2 − ε))."""
        return 2.0 * math.sin(self.epsilon) * cmath.exp(-1j * (math.pi / 2.0 - self.epsilon))

    def _large(self) -> complex:
        """The one of 1 ∓ z that tends to 2: 2 cos ε·exp(iε)."""
        return 2.0 * math.cos(self.epsilon) * cmath.exp(1j * self.epsilon)

    @property
    def one_minus_z(self) -> complex:
        return self._small() if self.even else self._large()

    @property
    def one_plus_z(self) -> complex:
        return self._large() if self.even else self._small()

    @property
    def inverse_small(self) -> complex:
        """1/(2 sin ε·exp(−i(π/2 − ε))) = 1/2 + (i/2)cot ε."""
        return complex(0.5, 0.5 / math.tan(self.epsilon))

    @property
    def inverse_large(self) -> complex:
        """1/(2 cos ε·exp(iε)) = 1/2 − (i/2)tan ε."""
        return complex(0.5, -0.5 * math.tan(self.epsilon))


@dataclass(frozen=True)
class UVCoordinates:
    """Rotated endpoint coordinates scaled by sqrt(mω/2ħ)."""

    u: complex
    v: complex
    scale: float

    @classmethod
    def from_endpoints(
        cls, config: OscillatorConfig, x_initial: complex, x_final: complex
    ) -> "UVCoordinates":
        if config.is_free:
            raise InvalidInputError("u/v coordinates need omega > 0")
        scale = math.sqrt(config.mass * config.omega / (2.0 * config.hbar))
        return cls(u=scale * (x_initial + x_final), v=scale * (x_initial - x_final), scale=scale)

    def to_endpoints(self) -> tuple[complex, complex]:
        """(x_I, x_F)."""
        return (
            (self.u + self.v) / (2.0 * self.scale),
            (self.u - self.v) / (2.0 * self.scale),
        )


@dataclass(frozen=True)
class SmearResult:
    """A smeared kernel value with the quadrature's error estimate."""

    value: complex
    error: float


@dataclass(frozen=True)
class DeltaRepresentationReport:
    """∫(πr)^(−1/2)exp(−x²/r)f(x)dx against f(0) along a sequence r → 0."""

    radii: list[float]
    values: list[complex]
    target: complex
    deviations: list[float]
    exact: list[complex] | None
    order: float | None


@dataclass(frozen=True)
class DeltaLimitStudy:
    """Finite-N smeared kernel at a caustic against the delta prediction."""

    m_index: int
    steps: list[int]
    values: list[complex]
    deviations: list[float]
    reference: complex
    converged_steps: int | None


def _require_caustic(config: OscillatorConfig, caustic_tol: float) -> int:
    at_caustic, m_index = caustic_classification(config, caustic_tol)
    if not at_caustic:
        raise InvalidInputError(
            f"ωT/π={config.half_periods:.12g} is not at a caustic (tolerance {caustic_tol:g})"
        )
    return m_index


def caustic_state(
    config: OscillatorConfig, n: int, caustic_tol: float = CAUSTIC_TOL
) -> CausticState:
    """
    ε(N) = Mπ/2 − arg σ(N), computed as (Mπ − ωT)/2 + N(a − arctan a).

    Raises:
        InvalidInputError: If ωT is not within caustic_tol of Mπ
        NumericalError: If ε(N) is not positive (ωT overshoots Mπ by more
            than this N resolves)
    """
    m_index = _require_caustic(config, caustic_tol)
    # sin ωT = (−1)^(M+1)·sin(Mπ − ωT) recovers the offset from Mπ exactly.
    offset = 0.5 * math.asin((-1) ** (m_index + 1) * math.sin(config.omega_time))
    epsilon = offset + sigma(config, n).deficit
    if epsilon <= 0.0:
        raise NumericalError(
            f"ε(N) = {epsilon:.3e} ≤ 0 at N={n}: ωT lies past Mπ by more than the lattice resolves"
        )
    return CausticState(m_index=m_index, steps=n, epsilon=epsilon)


def _uv_exponent(state: CausticState, coordinates: UVCoordinates) -> complex:
    """(u² + v²)/2 − u²/(1 + z) − v²/(1 − z), which is purely imaginary."""
    u_sq, v_sq = coordinates.u**2, coordinates.v**2
    if state.even:
        inv_minus, inv_plus = state.inverse_small, state.inverse_large
    else:
        inv_minus, inv_plus = state.inverse_large, state.inverse_small
    return 0.5 * (u_sq + v_sq) - u_sq * inv_plus - v_sq * inv_minus


def _uv_prefactor(config: OscillatorConfig, state: CausticState) -> complex:
    disc = Discretization(steps=state.steps, time=config.time)
    negatives = classify(config, disc, strict=False).negative_count
    norm = math.exp(sigma(config, state.steps).log_magnitude)
    # |1 − z|·|1 + z| = 2 sin 2ε for either parity.
    magnitude = math.sqrt(config.mass * config.omega / (math.pi * config.hbar)) / (
        norm * math.sqrt(2.0 * math.sin(2.0 * state.epsilon))
    )
    return magnitude * cmath.exp(-1j * (math.pi / 4.0 + negatives * math.pi / 2.0))


def rewrite_kernel_uv(
    config: OscillatorConfig,
    n: int,
    endpoints: UVCoordinates | tuple[float, float],
    caustic_tol: float = CAUSTIC_TOL,
) -> complex:
    """
    Finite-N kernel at a caustic in the u/v factorized form.

    K_N = sqrt(mω/πħ)·exp(−iπ/4 − iLπ/2)/(|σ|·sqrt|1 − z|·sqrt|1 + z|)
          · exp((u² + v²)/2 − u²/(1 + z) − v²/(1 − z))

    Args:
        config: Oscillator at a caustic
        n: Number of time steps
        endpoints: Either u/v coordinates or a pair (x_I, x_F)
    """
    state = caustic_state(config, n, caustic_tol)
    if not isinstance(endpoints, UVCoordinates):
        endpoints = UVCoordinates.from_endpoints(config, endpoints[0], endpoints[1])
    return _uv_prefactor(config, state) * cmath.exp(_uv_exponent(state, endpoints))


def contour_rotated_smear(
    config: OscillatorConfig,
    packet: GaussianPacket,
    x_final: float,
    n: int,
    caustic_tol: float = CAUSTIC_TOL,
) -> SmearResult:
    """
    ∫K_N(x_F, x_I)f(x_I)dx_I at a caustic along a rotated contour.

    The collapsing variable y (v for even M, u for odd M) carries the factor
    exp(−w·y²) with w = 1/(1 ∓ z) = |w|·exp(iθ). Substituting
    y = t·exp(−iθ/2) turns it into the damped Gaussian exp(−|w|t²); the rest
    of the integrand is entire, so it is evaluated at the rotated points.

    Raises:
        QuadratureError: If the quadrature does not reach its tolerance
    """
    state = caustic_state(config, n, caustic_tol)
    prefactor = _uv_prefactor(config, state)
    scale = math.sqrt(config.mass * config.omega / (2.0 * config.hbar))
    # x_I = anchor + y/scale with anchor the image (−1)^M·x_F of the delta.
    anchor = x_final if state.even else -x_final
    weight = state.inverse_small
    rotation = cmath.exp(-0.5j * cmath.phase(weight))
    width = 1.0 / math.sqrt(2.0 * abs(weight))

    def integrand(tau: float) -> complex:
        y = width * tau * rotation
        x_initial = anchor + y / scale
        coordinates = UVCoordinates(
            u=scale * (x_initial + x_final), v=scale * (x_initial - x_final), scale=scale
        )
        return cmath.exp(_uv_exponent(state, coordinates)) * packet(x_initial)

    result = complex_quad(integrand, -TRUNCATION_SIGMAS, TRUNCATION_SIGMAS)
    jacobian = prefactor * width * rotation / scale
    notification_manager.debug(
        f"[Caustic] N={n}: ε={state.epsilon:.6e}, contour width {width:.3e}, "
        f"quadrature error {result.error:.2e}"
    )
    return SmearResult(value=jacobian * result.value, error=abs(jacobian) * result.error)


def delta_prediction(config: OscillatorConfig, packet: GaussianPacket, x_final: float, m_index: int) -> complex:
    """exp(−iMπ/2)·f((−1)^M x_F)."""
    delta = CausticDelta.at(m_index)
    return delta.phase_factor * packet(delta.parity * x_final)


def smeared_kernel(
    config: OscillatorConfig,
    packet: GaussianPacket,
    x_final: float,
    steps: int | None = None,
    caustic_tol: float = CAUSTIC_TOL,
) -> SmearResult:
    """
    ∫K(x_F, x_I; T)f(x_I)dx_I for any T.

    Args:
        config: Oscillator parameters (the endpoints are ignored)
        packet: Test function f
        x_final: Final point x_F
        steps: N for the finite-N kernel, or None for the continuum kernel

    Raises:
        QuadratureError: If an adaptive quadrature fails
    """
    at_caustic, m_index = caustic_classification(config, caustic_tol)
    if at_caustic:
        if steps is None:
            return SmearResult(value=delta_prediction(config, packet, x_final, m_index), error=0.0)
        return contour_rotated_smear(config, packet, x_final, steps, caustic_tol)

    if steps is None:
        kernel = continuum_gaussian_kernel(config, caustic_tol)
    else:
        kernel = discrete_gaussian_kernel(
            config, Discretization(steps=steps, time=config.time), caustic_tol
        )
    lower, upper = packet.support(TRUNCATION_SIGMAS)
    result = complex_quad(
        lambda x: complex(kernel.value_at(x, x_final)) * packet(x), lower, upper, limit=500
    )
    return SmearResult(value=result.value, error=result.error)


def _nascent_delta_exact(packet: GaussianPacket, r: float) -> complex:
    width_sq = packet.width**2
    p = 1.0 / r + 1.0 / (2.0 * width_sq)
    q = packet.center / width_sq + 1j * packet.momentum
    constant = -packet.center**2 / (2.0 * width_sq)
    return (
        packet.normalization
        / math.sqrt(math.pi * r)
        * math.sqrt(math.pi / p)
        * cmath.exp(q * q / (4.0 * p) + constant)
    )


def delta_representation_check(
    r_sequence: Sequence[float],
    test_function: GaussianPacket | Callable[[float], complex],
) -> DeltaRepresentationReport:
    """
    Check that (πr)^(−1/2)exp(−x²/r) acts as δ(x) as r → 0.

    Gaussian packets also get the exact convolution for comparison.

    Raises:
        InvalidInputError: If some r is not positive
    """
    radii = [float(r) for r in r_sequence]
    if not radii or any(r <= 0.0 for r in radii):
        raise InvalidInputError("r sequence must be non-empty and strictly positive")

    target = complex(test_function(0.0))
    values: list[complex] = []
    for r in radii:
        half_width = TRUNCATION_SIGMAS * math.sqrt(r / 2.0)
        norm = 1.0 / math.sqrt(math.pi * r)
        result = complex_quad(
            lambda x, r=r, norm=norm: norm * math.exp(-x * x / r) * complex(test_function(x)),
            -half_width,
            half_width,
        )
        values.append(result.value)

    deviations = [abs(value - target) for value in values]
    exact = (
        [_nascent_delta_exact(test_function, r) for r in radii]
        if isinstance(test_function, GaussianPacket)
        else None
    )
    order: float | None = None
    if len(radii) >= 2 and all(d > 1e-14 for d in deviations):
        order = log_log_slope(radii, deviations)
    return DeltaRepresentationReport(
        radii=radii,
        values=values,
        target=target,
        deviations=deviations,
        exact=exact,
        order=order,
    )


def delta_limit_study(
    config: OscillatorConfig,
    packet: GaussianPacket,
    x_final: float,
    tolerance: float = DEFAULT_DELTA_TOLERANCE,
    start_steps: int = 64,
    max_steps: int = 2**20,
    caustic_tol: float = CAUSTIC_TOL,
) -> DeltaLimitStudy:
    """
    Double N until the finite-N smeared kernel is within tolerance of
    exp(−iMπ/2)·f((−1)^M x_F).

    The first N meeting the tolerance is reported as converged_steps; it is
    None when max_steps is reached first.
    """
    m_index = _require_caustic(config, caustic_tol)
    reference = delta_prediction(config, packet, x_final, m_index)

    steps: list[int] = []
    values: list[complex] = []
    deviations: list[float] = []
    converged: int | None = None
    n = max(2, start_steps)
    while n <= max_steps:
        value = contour_rotated_smear(config, packet, x_final, n, caustic_tol).value
        steps.append(n)
        values.append(value)
        deviations.append(abs(value - reference))
        if deviations[-1] < tolerance:
            converged = n
            break
        n *= 2

    if converged is None:
        notification_manager.warning(
            f"[Caustic] Delta limit not reached within tolerance {tolerance:g} by N={steps[-1]}"
        )
    else:
        notification_manager.debug(f"[Caustic] M={m_index}: N*={converged}")
    return DeltaLimitStudy(
        m_index=m_index,
        steps=steps,
        values=values,
        deviations=deviations,
        reference=reference,
        converged_steps=converged,
    )


def kernel_magnitude_growth(
    config: OscillatorConfig, ladder: Sequence[int], caustic_tol: float = CAUSTIC_TOL
) -> float:
    """Log-log slope of |K_N| at the origin (u = v = 0) against N."""
    magnitudes = [abs(rewrite_kernel_uv(config, n, (0.0, 0.0), caustic_tol)) for n in ladder]
    return log_log_slope(list(ladder), magnitudes)


def regular_reference(config: OscillatorConfig, packet: GaussianPacket, x_final: float) -> complex:
    """Closed-form smeared continuum kernel away from caustics."""
    return continuum_gaussian_kernel(config).smear_gaussian(packet, x_final)


