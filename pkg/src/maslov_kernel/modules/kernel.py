"""
Finite-N propagator of the harmonic oscillator and its continuum limit.

The N-step kernel is Q·exp(iS_c/ħ): Q collects the N−1 Fresnel integrals over
the eigen-coordinates of A, and S_c is the minimum of the lattice action. Both
are expressed through σ(N) = (1 + iωT/2N)^N, whose argument tends to ωT/2.

Every regular kernel (finite-N, continuum or free) is a Gaussian in the
endpoints, represented by GaussianKernel.
"""

import cmath
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import numpy.typing as npt

from ..errors import CausticProximityError, InvalidInputError, NumericalError
from ..model.kernel_value import CausticDelta, KernelValue, RegularKernel
from ..model.oscillator import Discretization, GaussianPacket, OscillatorConfig
from ..utils.notifications import notification_manager
from ..utils.numerics import log_log_slope, twice_sigma_argument
from .lattice_action import build_action
from .spectral import (
    CAUSTIC_TOL,
    LogProduct,
    Spectrum,
    caustic_classification,
    classify,
    determinant_closed_form,
)

SINE_PROXIMITY = 1e-6
SINGULAR_SINE = 1e-15
RESCALE_LIMIT = 1e150


class ActionMethod(str, Enum):
    """Route used to evaluate the classical action."""

    RECURSION = "recursion"
    SIGMA = "sigma"


@dataclass(frozen=True)
class SigmaValue:
    """σ(n) with its argument tracked as n·arctan(ωT/2n), never wrapped."""

    n: int
    log_magnitude: float
    arg: float
    deficit: float
    sin_twice_arg: float
    cos_twice_arg: float

    @property
    def value(self) -> complex:
        return cmath.exp(complex(self.log_magnitude, self.arg))

    @property
    def squared_magnitude(self) -> float:
        """|σ|² = (1 + (ωT/2n)²)^n."""
        return math.exp(2.0 * self.log_magnitude)

    @property
    def im_squared_over_norm(self) -> float:
        """Im σ² / |σ|² = sin(2·arg σ)."""
        return self.sin_twice_arg


@dataclass(frozen=True)
class DeterminantSequence:
    """D_0..D_{N−1} of the leading principal minors, as log|D_n| and sign."""

    log_abs: npt.NDArray[np.float64]
    signs: npt.NDArray[np.int8]

    def __len__(self) -> int:
        return int(self.log_abs.shape[0])

    def value(self, n: int) -> float:
        return float(self.signs[n] * math.exp(self.log_abs[n]))

    @property
    def final(self) -> LogProduct:
        sign = int(self.signs[-1])
        negatives = int(np.count_nonzero(np.diff(np.concatenate(([1], self.signs))) != 0))
        return LogProduct(
            log_magnitude=float(self.log_abs[-1]), sign=sign, negative_count=negatives
        )


@dataclass(frozen=True)
class FluctuationFactor:
    """Q = magnitude·exp(i·phase) with phase = −π/4 − Lπ/2."""

    magnitude: float
    phase: float
    maslov_index: int

    @property
    def value(self) -> complex:
        return self.magnitude * cmath.exp(1j * self.phase)


@dataclass(frozen=True)
class GaussianKernel:
    """
    K(x_I, x_F) = magnitude·exp(i·base_phase)·exp(i(diagonal·(x_I² + x_F²) + cross·x_I·x_F)).

    diagonal and cross are the coefficients of S_c/ħ.
    """

    magnitude: float
    base_phase: float
    maslov_index: int
    diagonal: float
    cross: float

    @property
    def maslov_phase(self) -> float:
        return -self.maslov_index * math.pi / 2.0

    @property
    def prefactor(self) -> complex:
        return self.magnitude * cmath.exp(1j * self.base_phase)

    def action_phase(self, x_initial: npt.ArrayLike, x_final: npt.ArrayLike) -> npt.NDArray:
        x_i = np.asarray(x_initial)
        x_f = np.asarray(x_final)
        return self.diagonal * (x_i**2 + x_f**2) + self.cross * x_i * x_f

    def value_at(self, x_initial: npt.ArrayLike, x_final: npt.ArrayLike) -> npt.NDArray:
        """Vectorized evaluation, complex endpoints allowed."""
        return self.prefactor * np.exp(1j * self.action_phase(x_initial, x_final))

    def at(self, x_initial: float, x_final: float) -> RegularKernel:
        phase = self.base_phase + float(np.real(self.action_phase(x_initial, x_final)))
        return RegularKernel(
            magnitude=self.magnitude,
            phase=phase,
            maslov_phase=self.maslov_phase,
            maslov_index=self.maslov_index,
        )

    def smear_gaussian(self, packet: GaussianPacket, x_final: float) -> complex:
        """
        ∫ K(x_F, x_I)·f(x_I) dx_I in closed form.

        The integrand is exp(−p·x² + q·x + const) with Re p = 1/(2w²) > 0.
        """
        width_sq = packet.width**2
        p = 1.0 / (2.0 * width_sq) - 1j * self.diagonal
        q = packet.center / width_sq + 1j * packet.momentum + 1j * self.cross * x_final
        constant = 1j * self.diagonal * x_final**2 - packet.center**2 / (2.0 * width_sq)
        gaussian = cmath.sqrt(math.pi / p) * cmath.exp(q * q / (4.0 * p) + constant)
        return self.prefactor * packet.normalization * gaussian


@dataclass(frozen=True)
class ConvergenceStudy:
    """|K_N − K| along an N ladder with the fitted log-log order."""

    steps: list[int]
    errors: list[float]
    reference: RegularKernel
    order: float | None
    doubling_ratios: list[float] = field(default_factory=list)


def sigma(config: OscillatorConfig, n: int) -> SigmaValue:
    """
    σ(n) = (1 + iωT/2n)^n as exp(n·log(1 + iωT/2n)).

    Raises:
        InvalidInputError: If n < 1
    """
    if n < 1:
        raise InvalidInputError(f"sigma needs n >= 1, got {n}")
    a = config.omega_time / (2.0 * n)
    sine, cosine, deficit = twice_sigma_argument(config.omega_time, n)
    return SigmaValue(
        n=n,
        log_magnitude=0.5 * n * math.log1p(a * a),
        arg=n * math.atan(a),
        deficit=deficit,
        sin_twice_arg=sine,
        cos_twice_arg=cosine,
    )


def determinant_sequence(config: OscillatorConfig, disc: Discretization) -> DeterminantSequence:
    """
    Leading minors of A from D_{n+1} = 2α·D_n − β²·D_{n−1}, D_0 = 1, D_1 = 2α.

    The pair (D_{n−1}, D_n) is rescaled whenever it leaves [1/RESCALE_LIMIT,
    RESCALE_LIMIT], the scale being accumulated in log form.
    """
    action = build_action(config, disc)
    two_alpha = 2.0 * action.alpha
    beta_sq = action.beta**2
    size = disc.steps

    log_abs = np.empty(size)
    signs = np.empty(size, dtype=np.int8)
    log_abs[0], signs[0] = 0.0, 1

    previous, current, log_scale = 1.0, two_alpha, 0.0
    with np.errstate(divide="ignore"):
        for n in range(1, size):
            if n > 1:
                previous, current = current, two_alpha * current - beta_sq * previous
            magnitude = abs(current)
            if magnitude > RESCALE_LIMIT or 0.0 < magnitude < 1.0 / RESCALE_LIMIT:
                shift = math.log(magnitude)
                current /= magnitude
                previous /= magnitude
                log_scale += shift
                magnitude = 1.0
            log_abs[n] = np.log(magnitude) + log_scale
            signs[n] = 1 if current > 0 else (-1 if current < 0 else 0)
    return DeterminantSequence(log_abs=log_abs, signs=signs)


def _check_spectrum(spectrum: Spectrum, disc: Discretization) -> None:
    if spectrum.steps != disc.steps:
        raise InvalidInputError(
            f"Spectrum computed for N={spectrum.steps}, lattice has N={disc.steps}"
        )


def fluctuation_factor(
    config: OscillatorConfig, disc: Discretization, spectrum: Spectrum
) -> FluctuationFactor:
    """
    Q = sqrt(m/2πħΔt)·Π|λ_k|^(−1/2)·exp(−iπ/4 − iLπ/2).

    The magnitude uses Π|λ_k| = (N/ωT)|Im σ²|; the phase is assembled from the
    Fresnel branch of each eigen-coordinate, so no root of a negative number
    is taken.

    Raises:
        CausticProximityError: If Im σ² is numerically zero
    """
    _check_spectrum(spectrum, disc)
    if not config.is_free:
        s = sigma(config, disc.steps)
        if abs(s.im_squared_over_norm) < SINGULAR_SINE:
            raise CausticProximityError(
                f"Im σ² vanishes at N={disc.steps}; evaluate the kernel in smeared form",
                m_index=spectrum.m_index,
            )
    determinant = determinant_closed_form(config, disc)
    log_magnitude = 0.5 * (
        math.log(config.mass / (2.0 * math.pi * config.hbar * disc.delta_t))
        - determinant.log_magnitude
    )
    negatives = spectrum.negative_count
    return FluctuationFactor(
        magnitude=math.exp(log_magnitude),
        phase=-math.pi / 4.0 - negatives * math.pi / 2.0,
        maslov_index=negatives,
    )


def inverse_corner_entries(
    config: OscillatorConfig, disc: Discretization
) -> tuple[float, float]:
    """
    Corner entries of A⁻¹ from the minor recursion.

    Returns:
        ((A⁻¹)_{11} = D_{N−2}/D_{N−1}, (A⁻¹)_{1,N−1} = β^(N−2)/D_{N−1})

    Raises:
        CausticProximityError: If D_{N−1} vanishes
    """
    minors = determinant_sequence(config, disc)
    if minors.signs[-1] == 0:
        raise CausticProximityError(
            f"D_(N-1) vanishes at N={disc.steps}", m_index=config.m_index
        )
    action = build_action(config, disc)
    last = len(minors) - 1
    diagonal_entry = (
        minors.signs[last - 1]
        * minors.signs[last]
        * math.exp(minors.log_abs[last - 1] - minors.log_abs[last])
    )
    corner_entry = minors.signs[last] * math.exp(
        (disc.steps - 2) * math.log(action.beta) - minors.log_abs[last]
    )
    return float(diagonal_entry), float(corner_entry)


def _action_coefficients(
    config: OscillatorConfig, disc: Discretization, method: ActionMethod
) -> tuple[float, float]:
    """Coefficients (diagonal, cross) of S_c in x_I² + x_F² and x_I·x_F."""
    if method is ActionMethod.SIGMA and not config.is_free:
        s = sigma(config, disc.steps)
        sine = s.im_squared_over_norm
        if abs(sine) < SINGULAR_SINE:
            raise CausticProximityError(
                f"Im σ² vanishes at N={disc.steps}", m_index=config.m_index
            )
        cosine = s.cos_twice_arg
        half_mw = 0.5 * config.mass * config.omega
        return half_mw * cosine / sine, -2.0 * half_mw / sine

    action = build_action(config, disc)
    diagonal_entry, corner_entry = inverse_corner_entries(config, disc)
    scale = config.mass / (2.0 * disc.delta_t)
    diagonal = scale * (action.alpha - action.beta**2 * diagonal_entry)
    cross = -2.0 * scale * action.beta**2 * corner_entry
    return diagonal, cross


def classical_action(
    config: OscillatorConfig,
    disc: Discretization,
    method: ActionMethod = ActionMethod.RECURSION,
) -> float:
    """
    Minimum S_c of the lattice action over the interior points.

    RECURSION uses (m/2Δt){(α − β²D_{N−2}/D_{N−1})(x_I² + x_F²) − 2(β^N/D_{N−1})x_I·x_F};
    SIGMA uses (mω/2)[Re σ²(x_I² + x_F²) − 2|σ|²x_I·x_F]/Im σ², in which |σ|
    cancels.

    Raises:
        CausticProximityError: If D_{N−1} (equivalently Im σ²) vanishes
    """
    diagonal, cross = _action_coefficients(config, disc, method)
    x_i, x_f = config.x_initial, config.x_final
    return diagonal * (x_i**2 + x_f**2) + cross * x_i * x_f


def discrete_gaussian_kernel(
    config: OscillatorConfig,
    disc: Discretization,
    caustic_tol: float = CAUSTIC_TOL,
    allow_caustic: bool = False,
    strict: bool = True,
    method: ActionMethod = ActionMethod.SIGMA,
) -> GaussianKernel:
    """
    The finite-N kernel as a Gaussian in the endpoints.

    Raises:
        CausticProximityError: If ωT is within caustic_tol of Mπ or
            |sin ωT| < 1e−6, unless allow_caustic
        SpectrumTooCoarseError: If strict and N has not reached the
            asymptotic negative count
    """
    at_caustic, _ = caustic_classification(config, caustic_tol)
    if not allow_caustic and not config.is_free:
        if at_caustic or abs(math.sin(config.omega_time)) < SINE_PROXIMITY:
            nearest = round(config.half_periods)
            raise CausticProximityError(
                f"ωT={config.omega_time:.12g} is at a caustic (M={nearest}); "
                f"use the smeared evaluation instead",
                m_index=nearest,
            )

    spectrum = classify(config, disc, caustic_tol, strict=strict and not allow_caustic)
    factor = fluctuation_factor(config, disc, spectrum)
    diagonal, cross = _action_coefficients(config, disc, method)
    kernel = GaussianKernel(
        magnitude=factor.magnitude,
        base_phase=factor.phase,
        maslov_index=factor.maslov_index,
        diagonal=diagonal / config.hbar,
        cross=cross / config.hbar,
    )
    notification_manager.debug(
        f"[Kernel] N={disc.steps}: |Q|={kernel.magnitude:.12g}, L={kernel.maslov_index}"
    )
    return kernel


def discrete_kernel(
    config: OscillatorConfig,
    disc: Discretization,
    caustic_tol: float = CAUSTIC_TOL,
    allow_caustic: bool = False,
    strict: bool = True,
) -> RegularKernel:
    """
    Finite-N kernel Q·exp(iS_c/ħ) at the configured endpoints.

    No limit is taken: this is the exact value of the N-step lattice integral.
    """
    kernel = discrete_gaussian_kernel(
        config, disc, caustic_tol, allow_caustic=allow_caustic, strict=strict
    )
    return kernel.at(config.x_initial, config.x_final)


def free_gaussian_kernel(config: OscillatorConfig) -> GaussianKernel:
    """sqrt(m/2πiħT)·exp(im(x_F − x_I)²/2ħT)."""
    scale = config.mass / (config.hbar * config.time)
    return GaussianKernel(
        magnitude=math.sqrt(scale / (2.0 * math.pi)),
        base_phase=-math.pi / 4.0,
        maslov_index=0,
        diagonal=0.5 * scale,
        cross=-scale,
    )


def continuum_gaussian_kernel(
    config: OscillatorConfig, caustic_tol: float = CAUSTIC_TOL
) -> GaussianKernel:
    """
    sqrt(mω/2πiħ|sin ωT|)·exp(−iMπ/2)·exp(imω((x_I² + x_F²)cos ωT − 2x_I·x_F)/2ħ sin ωT).

    Raises:
        CausticProximityError: At a caustic, where the kernel is a delta
    """
    if config.is_free:
        return free_gaussian_kernel(config)
    at_caustic, m_index = caustic_classification(config, caustic_tol)
    sine = math.sin(config.omega_time)
    if at_caustic or abs(sine) < SINGULAR_SINE:
        raise CausticProximityError(
            f"ωT={config.omega_time:.12g} is a caustic; the kernel is a delta", m_index=m_index
        )
    half_mw = 0.5 * config.mass * config.omega / config.hbar
    return GaussianKernel(
        magnitude=math.sqrt(half_mw / (math.pi * abs(sine))),
        base_phase=-math.pi / 4.0 - m_index * math.pi / 2.0,
        maslov_index=m_index,
        diagonal=half_mw * math.cos(config.omega_time) / sine,
        cross=-2.0 * half_mw / sine,
    )


def closed_form_kernel(config: OscillatorConfig, caustic_tol: float = CAUSTIC_TOL) -> KernelValue:
    """
    Continuum kernel for any T.

    Returns the free kernel for ω = 0, CausticDelta at ωT = Mπ and the
    Maslov-corrected Gaussian otherwise.
    """
    at_caustic, m_index = caustic_classification(config, caustic_tol)
    if at_caustic:
        return CausticDelta.at(m_index)
    kernel = continuum_gaussian_kernel(config, caustic_tol)
    return kernel.at(config.x_initial, config.x_final)


def convergence_study(
    config: OscillatorConfig,
    ladder: Sequence[int],
    caustic_tol: float = CAUSTIC_TOL,
) -> ConvergenceStudy:
    """
    |K_N − K| for each N of the ladder and the fitted order of decay.

    The order is the negated log-log slope; it is None when some error is
    exactly zero (the free particle is exact at every N).

    Raises:
        InvalidInputError: If T is at a caustic (use the smeared evaluation)
            or the ladder is empty
    """
    if not ladder:
        raise InvalidInputError("Convergence study needs a non-empty N ladder")
    reference_value = closed_form_kernel(config, caustic_tol)
    if not isinstance(reference_value, RegularKernel):
        raise InvalidInputError(
            f"ωT={config.omega_time:.12g} is a caustic; convergence of the pointwise "
            f"kernel is undefined, use the smear command"
        )

    steps = sorted(set(int(n) for n in ladder))
    errors: list[float] = []
    for n in steps:
        value = discrete_kernel(config, Discretization(steps=n, time=config.time), caustic_tol)
        errors.append(abs(value.amplitude - reference_value.amplitude))

    order: float | None = None
    if len(steps) >= 2 and all(e > 0.0 for e in errors):
        order = -log_log_slope(steps, errors)
    ratios = [
        errors[i + 1] / errors[i]
        for i in range(len(errors) - 1)
        if errors[i] > 0.0 and steps[i + 1] == 2 * steps[i]
    ]
    if order is not None:
        notification_manager.debug(f"[Kernel] Fitted convergence order {order:.4f}")
    return ConvergenceStudy(
        steps=steps,
        errors=errors,
        reference=reference_value,
        order=order,
        doubling_ratios=ratios,
    )


def kernel_difference(discrete: RegularKernel, closed: KernelValue) -> float:
    """|K_N − K| when both are regular, NaN otherwise."""
    if isinstance(closed, RegularKernel):
        return abs(discrete.amplitude - closed.amplitude)
    return float("nan")


def determinant_consistency(config: OscillatorConfig, disc: Discretization) -> float:
    """Relative gap between the recursion's D_{N−1} and the σ closed form, in log form."""
    recursion = determinant_sequence(config, disc).final
    closed = determinant_closed_form(config, disc)
    if recursion.sign != closed.sign:
        raise NumericalError(
            f"Determinant sign mismatch at N={disc.steps}: recursion {recursion.sign}, "
            f"closed form {closed.sign}"
        )
    return abs(math.expm1(recursion.log_magnitude - closed.log_magnitude))
