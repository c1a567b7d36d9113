"""
Independent ground truths for the propagator.

Nothing here goes through the eigenvalue formulas, the minor recursion or σ(N):

- brute_force_fresnel sums the regularized (N−1)-dimensional lattice integral
  on a grid and extrapolates the damping to zero,
- quadratic_form_kernel completes the square with dense linear algebra,
- step_composition_evolve applies a one-step kernel repeatedly to a wave packet,
- eigenfunction_expansion_kernel sums the Hermite-function series.
"""

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy.signal import fftconvolve

from ..errors import (
    ExpansionTruncationError,
    ExtrapolationError,
    InvalidInputError,
    NumericalError,
)
from ..model.kernel_value import RegularKernel
from ..model.oscillator import Discretization, GaussianPacket, OscillatorConfig
from ..utils.notifications import notification_manager
from ..utils.numerics import neville_table
from ..utils.system_resources import get_available_memory_mb
from .lattice_action import build_action
from .spectral import sturm_count

# exp(−25) bounds both the box truncation and the grid aliasing error.
GRID_DECAY = 5.0
TENSOR_GRID_LIMIT = 50_000_000
EVOLUTION_PADDING = 10.0
EVOLUTION_SPACING_SAFETY = 2.5


class ContractionMode(str, Enum):
    """How the grid sum over the interior points is carried out."""

    CHAIN = "chain"  # one coordinate at a time, couplings by FFT convolution
    TENSOR = "tensor"  # full tensor grid, small grids only


class StepKernel(str, Enum):
    """One-step propagator used by step composition."""

    EXACT = "exact"  # closed-form kernel at time Δt
    LATTICE = "lattice"  # midpoint short-time factor of the lattice action


class QuadratureSpec(BaseModel):
    """Damping ladder and grid limits for the brute-force Fresnel integral."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    damping_epsilons: list[float] = Field(
        default_factory=lambda: [0.1, 0.05, 0.025, 0.0125, 0.00625],
        min_length=3,
        description="Decreasing dimensionless dampings ε, in units of m/(2ħΔt)",
    )
    box_halfwidth: float | None = Field(
        None, gt=0, description="Half-width of the integration box in x; derived from ε if unset"
    )
    points_per_dim: int = Field(64, ge=64, description="Minimum grid points per dimension")
    extrapolation_rtol: float = Field(
        1e-4, gt=0, description="Largest accepted gap between the last two extrapolants"
    )
    max_rescales: int = Field(
        3, ge=0, description="Retries with the ladder divided by rescale_factor after a failed extrapolation"
    )
    rescale_factor: float = Field(4.0, gt=1, description="Divisor applied to the ladder per retry")

    @field_validator("damping_epsilons")
    @classmethod
    def epsilons_decreasing(cls, v: list[float]) -> list[float]:
        """Ensure the ladder is positive and strictly decreasing."""
        if any(e <= 0 for e in v):
            raise ValueError("damping_epsilons must be positive")
        if any(b >= a for a, b in zip(v, v[1:])):
            raise ValueError("damping_epsilons must be strictly decreasing")
        return v


@dataclass(frozen=True)
class FresnelEstimate:
    """Extrapolated lattice integral with the per-ε raw values."""

    value: complex
    epsilons: list[float]
    raw_values: list[complex]
    grid_points: list[int]
    residuals: list[float]


@dataclass(frozen=True)
class EvolutionResult:
    """Wave function on a uniform grid after step composition."""

    grid: npt.NDArray[np.float64]
    values: npt.NDArray[np.complex128]
    spacing: float
    extent: float
    steps: int
    delta_t: float
    step_kernel: StepKernel

    @property
    def metadata(self) -> dict[str, float | int | str]:
        return {
            "spacing": self.spacing,
            "extent": self.extent,
            "points": int(self.grid.shape[0]),
            "steps": self.steps,
            "delta_t": self.delta_t,
            "step_kernel": self.step_kernel.value,
        }


@dataclass(frozen=True)
class ExpansionResult:
    """Partial sum of the Hermite series smeared against a packet."""

    value: complex
    n_max: int
    tail_weight: float
    coefficients: npt.NDArray[np.complex128] = field(repr=False)


@dataclass(frozen=True)
class PacketModes:
    """Classical and width parameters of an evolved Gaussian packet."""

    position: float
    momentum: float
    width_q: complex
    width_p: complex
    width_angle: float
    action: float


def _scaled_endpoint_couplings(
    config: OscillatorConfig, disc: Discretization
) -> tuple[float, float, float, float, float]:
    action = build_action(config, disc)
    kappa = config.mass / (2.0 * config.hbar * disc.delta_t)
    root = math.sqrt(kappa)
    return (
        action.alpha,
        action.beta,
        kappa,
        -action.beta * config.x_initial * root,
        -action.beta * config.x_final * root,
    )


def _site_weights(
    grid: npt.NDArray[np.float64],
    alpha: float,
    epsilon: float,
    size: int,
    first_shift: float,
    last_shift: float,
) -> list[npt.NDArray[np.complex128]]:
    base = np.exp((2j * alpha - epsilon) * grid**2)
    weights = [base.copy() for _ in range(size)]
    weights[0] = weights[0] * np.exp(2j * first_shift * grid)
    weights[-1] = weights[-1] * np.exp(2j * last_shift * grid)
    return weights


def fresnel_grid_sum(
    config: OscillatorConfig,
    disc: Discretization,
    epsilon: float,
    points: int,
    halfwidth: float,
    mode: ContractionMode = ContractionMode.CHAIN,
) -> complex:
    """
    Grid sum of (m/2πiħΔt)^(N/2)∫d^(N−1)x exp(iS/ħ − εκΣx²), κ = m/2ħΔt.

    In y = sqrt(κ)·x the integrand is exp(i·yᵀAy + 2i·b̃ᵀy − ε·Σy²). The
    coupling exp(−2iβ·y·y') on a uniform grid factorizes into chirps,
    exp(−iβy²)·exp(−iβy'²)·exp(iβ(y − y')²), whose last factor depends on the
    index difference only, so each contraction is a convolution.

    Args:
        halfwidth: Half-width of the grid in the scaled variable y
    """
    if points < 2 or halfwidth <= 0:
        raise InvalidInputError("Grid needs at least two points and a positive half-width")
    alpha, beta, kappa, first_shift, last_shift = _scaled_endpoint_couplings(config, disc)
    size = disc.interior_size
    grid = np.linspace(-halfwidth, halfwidth, points)
    h = grid[1] - grid[0]
    weights = _site_weights(grid, alpha, epsilon, size, first_shift, last_shift)

    if mode is ContractionMode.TENSOR:
        if points**size > TENSOR_GRID_LIMIT:
            raise InvalidInputError(
                f"Tensor grid of {points}^{size} points is too large; use the chain contraction"
            )
        total: npt.NDArray[np.complex128] = np.ones((1,) * size, dtype=complex)
        axes = []
        for j in range(size):
            shape = [1] * size
            shape[j] = points
            axes.append(grid.reshape(shape))
            total = total * weights[j].reshape(shape)
        for j in range(size - 1):
            total = total * np.exp(-2j * beta * axes[j] * axes[j + 1])
        integral = complex(np.sum(total)) * h**size
    else:
        offsets = np.arange(-(points - 1), points) * h
        chirp = np.exp(1j * beta * offsets**2)
        half_chirp = np.exp(-1j * beta * grid**2)
        carried = weights[0]
        for j in range(1, size):
            convolved = fftconvolve(carried * half_chirp, chirp, mode="full")
            carried = weights[j] * half_chirp * h * convolved[points - 1 : 2 * points - 1]
        integral = complex(np.sum(carried)) * h

    n = disc.steps
    c_term = kappa * alpha * (config.x_initial**2 + config.x_final**2)
    prefactor = (
        math.sqrt(kappa)
        * math.pi ** (-n / 2.0)
        * cmath.exp(1j * (c_term - math.pi * n / 4.0))
    )
    return prefactor * integral


def _grid_for(
    config: OscillatorConfig, disc: Discretization, epsilon: float, spec: QuadratureSpec
) -> tuple[int, float]:
    action = build_action(config, disc)
    # Gershgorin bound on the spectral radius of A.
    radius = 2.0 * abs(action.alpha) + 2.0 * action.beta
    if spec.box_halfwidth is not None:
        kappa = config.mass / (2.0 * config.hbar * disc.delta_t)
        halfwidth = math.sqrt(kappa) * spec.box_halfwidth
    else:
        halfwidth = GRID_DECAY / math.sqrt(epsilon)
    spacing = math.pi * math.sqrt(epsilon) / (GRID_DECAY * radius)
    points = max(spec.points_per_dim, math.ceil(2.0 * halfwidth / spacing) + 1)
    return points, halfwidth


def brute_force_fresnel(
    config: OscillatorConfig,
    disc: Discretization,
    spec: QuadratureSpec | None = None,
    mode: ContractionMode = ContractionMode.CHAIN,
) -> FresnelEstimate:
    """
    The N-step kernel from the regularized lattice integral, N ∈ {2, 3, 4}.

    The integral is summed for every damping of the ladder and Neville's
    scheme extrapolates the values to ε = 0. The extrapolation only converges
    for dampings below the smallest |λ_k|, so a failed ladder is divided by
    spec.rescale_factor and retried, at most spec.max_rescales times; the grid
    refines with it.

    Raises:
        InvalidInputError: If N is outside 2..4
        ExtrapolationError: If the last two extrapolants still disagree by more
            than spec.extrapolation_rtol after every rescaled ladder
    """
    if disc.steps not in (2, 3, 4):
        raise InvalidInputError(f"Brute force is limited to N ∈ {{2, 3, 4}}, got N={disc.steps}")
    spec = spec or QuadratureSpec()

    epsilons = list(spec.damping_epsilons)
    for _ in range(spec.max_rescales):
        try:
            return _extrapolate_ladder(config, disc, epsilons, spec, mode)
        except ExtrapolationError as e:
            notification_manager.debug(
                f"[Oracle] {e}; dividing the damping ladder by {spec.rescale_factor:g}"
            )
        epsilons = [epsilon / spec.rescale_factor for epsilon in epsilons]
    return _extrapolate_ladder(config, disc, epsilons, spec, mode)


def _extrapolate_ladder(
    config: OscillatorConfig,
    disc: Discretization,
    epsilons: list[float],
    spec: QuadratureSpec,
    mode: ContractionMode,
) -> FresnelEstimate:
    raw_values: list[complex] = []
    grid_points: list[int] = []
    for epsilon in epsilons:
        points, halfwidth = _grid_for(config, disc, epsilon, spec)
        raw_values.append(fresnel_grid_sum(config, disc, epsilon, points, halfwidth, mode))
        grid_points.append(points)
        notification_manager.debug(
            f"[Oracle] N={disc.steps}, ε={epsilon:g}: {points} points per dimension"
        )

    table = neville_table(epsilons, raw_values, at=0.0)
    diagonal = np.diag(table)
    residuals = [float(abs(diagonal[i + 1] - diagonal[i])) for i in range(len(diagonal) - 1)]
    value = complex(diagonal[-1])
    if residuals[-1] > spec.extrapolation_rtol * abs(value):
        raise ExtrapolationError(
            f"Damping extrapolation unstable at N={disc.steps}: last residual "
            f"{residuals[-1]:.3e} for |K|={abs(value):.3e}",
            residuals=residuals,
        )
    return FresnelEstimate(
        value=value,
        epsilons=epsilons,
        raw_values=raw_values,
        grid_points=grid_points,
        residuals=residuals,
    )


def quadratic_form_kernel(config: OscillatorConfig, disc: Discretization) -> RegularKernel:
    """
    Kernel by completing the square with dense linear algebra.

    S_c = (m/2Δt)(c − ᵗbA⁻¹b) from a dense solve, |det A| and its sign from
    slogdet, and the negative count from a Sturm count at zero.

    Raises:
        NumericalError: If A is singular or the determinant sign contradicts
            the negative count
    """
    action = build_action(config, disc)
    matrix = action.dense_matrix()
    sign, log_det = np.linalg.slogdet(matrix)
    if sign == 0:
        raise NumericalError(f"A is singular at N={disc.steps}")

    diagonal = np.full(action.size, action.diagonal)
    off_diagonal = np.full(action.size - 1, action.off_diagonal)
    negatives = int(sturm_count(diagonal, off_diagonal, 0.0)[0])
    if (-1) ** negatives != int(sign):
        raise NumericalError(
            f"det A has sign {int(sign)} but {negatives} eigenvalues are negative"
        )

    solution = np.linalg.solve(matrix, action.vector_b)
    scale = config.mass / (2.0 * disc.delta_t)
    classical = scale * (action.scalar_c - float(action.vector_b @ solution))
    magnitude = math.sqrt(config.mass / (2.0 * math.pi * config.hbar * disc.delta_t)) * math.exp(
        -0.5 * float(log_det)
    )
    maslov_phase = -negatives * math.pi / 2.0
    return RegularKernel(
        magnitude=magnitude,
        phase=-math.pi / 4.0 + maslov_phase + classical / config.hbar,
        maslov_phase=maslov_phase,
        maslov_index=negatives,
    )


def _step_kernel_matrix(
    config: OscillatorConfig,
    grid: npt.NDArray[np.float64],
    delta_t: float,
    step_kernel: StepKernel,
) -> npt.NDArray[np.complex128]:
    x = grid[:, None]
    y = grid[None, :]
    m, hbar, omega = config.mass, config.hbar, config.omega
    if step_kernel is StepKernel.LATTICE or omega == 0.0:
        quarter = (omega * delta_t) ** 2 / 4.0
        prefactor = cmath.sqrt(m / (2j * math.pi * hbar * delta_t))
        phase = m / (2.0 * hbar * delta_t) * ((x - y) ** 2 - quarter * (x + y) ** 2)
        return prefactor * np.exp(1j * phase)

    sine, cosine = math.sin(omega * delta_t), math.cos(omega * delta_t)
    if sine <= 0.0:
        raise InvalidInputError(f"ωΔt={omega * delta_t:.6g} must lie in (0, π) for one step")
    prefactor = math.sqrt(m * omega / (2.0 * math.pi * hbar * sine)) * cmath.exp(-0.25j * math.pi)
    phase = m * omega / (2.0 * hbar * sine) * ((x**2 + y**2) * cosine - 2.0 * x * y)
    return prefactor * np.exp(1j * phase)


def evolution_extent(config: OscillatorConfig, packet: GaussianPacket, time: float) -> float:
    """Half-width of a grid that holds the packet at every time up to `time`."""
    m, hbar, omega = config.mass, config.hbar, config.omega
    width = packet.width
    velocity = hbar * packet.momentum / m
    if omega == 0.0:
        travel = abs(packet.center) + abs(velocity) * time
        spread = width * math.sqrt(1.0 + (hbar * time / (m * width**2)) ** 2)
    else:
        travel = math.hypot(packet.center, velocity / omega)
        spread = max(width, hbar / (m * omega * width))
    return travel + EVOLUTION_PADDING * spread


def step_composition_evolve(
    config: OscillatorConfig,
    packet: GaussianPacket,
    steps: int,
    step_kernel: StepKernel = StepKernel.EXACT,
    spacing: float | None = None,
    extent: float | None = None,
) -> EvolutionResult:
    """
    ψ(x, T) from repeated application of a one-step kernel on a uniform grid.

    The default spacing is ħΔtπ/(2.5·m·X) for grid half-width X, which keeps
    the phase of the one-step kernel resolved over the whole grid.

    Raises:
        InvalidInputError: If steps < 1 or a given spacing is coarser than
            ħΔtπ/(m·X)
    """
    if steps < 1:
        raise InvalidInputError(f"Step composition needs at least one step, got {steps}")
    delta_t = config.time / steps
    half_width = extent if extent is not None else evolution_extent(config, packet, config.time)
    limit = config.hbar * delta_t * math.pi / (config.mass * half_width)
    if spacing is None:
        spacing = limit / EVOLUTION_SPACING_SAFETY
    elif spacing >= limit:
        raise InvalidInputError(
            f"Grid spacing {spacing:.4g} does not resolve the step kernel; "
            f"it must be below ħΔtπ/(mX) = {limit:.4g}"
        )

    points = 2 * math.ceil(half_width / spacing) + 1
    matrix_mb = points * points * 16 / 1024**2
    if matrix_mb > 0.5 * get_available_memory_mb():
        raise InvalidInputError(
            f"Step kernel matrix of {points}x{points} points needs {matrix_mb:.0f} MB; "
            f"reduce T or the packet extent"
        )
    grid = np.linspace(-half_width, half_width, points)
    h = grid[1] - grid[0]
    propagator = _step_kernel_matrix(config, grid, delta_t, step_kernel) * h

    values = packet.sample(grid)
    for _ in range(steps):
        values = propagator @ values
    notification_manager.debug(
        f"[Oracle] Step composition: {steps} steps on {points} points, h={h:.4g}, X={half_width:.4g}"
    )
    return EvolutionResult(
        grid=grid,
        values=values,
        spacing=float(h),
        extent=half_width,
        steps=steps,
        delta_t=delta_t,
        step_kernel=step_kernel,
    )


def packet_modes(config: OscillatorConfig, packet: GaussianPacket, time: float) -> PacketModes:
    """
    Classical center and complex width matrices (Q, P) of an evolved packet.

    Q, P follow the classical flow; the angle of Q is tracked continuously from
    0, so exp(−i·angle/2) carries the phase lost at each focal point.
    """
    m, hbar, omega = config.mass, config.hbar, config.omega
    q0, p0 = packet.center, hbar * packet.momentum
    width_q0 = packet.width / math.sqrt(hbar)
    width_p0 = 1j * math.sqrt(hbar) / packet.width
    if omega == 0.0:
        position = q0 + p0 * time / m
        momentum = p0
        width_q = width_q0 + width_p0 * time / m
        width_p = width_p0
        angle = math.atan2(width_q.imag, width_q.real)
    else:
        c, s = math.cos(omega * time), math.sin(omega * time)
        position = q0 * c + p0 / (m * omega) * s
        momentum = p0 * c - m * omega * q0 * s
        width_q = width_q0 * c + width_p0 / (m * omega) * s
        width_p = width_p0 * c - m * omega * width_q0 * s
        turns = round(omega * time / math.pi)
        reduced = omega * time - turns * math.pi
        ratio = (math.sqrt(hbar) / (packet.width * m * omega)) / width_q0
        angle = turns * math.pi + math.atan(ratio * math.tan(reduced))
    return PacketModes(
        position=position,
        momentum=momentum,
        width_q=width_q,
        width_p=width_p,
        width_angle=angle,
        action=0.5 * (momentum * position - p0 * q0),
    )


def evolve_gaussian_closed_form(
    config: OscillatorConfig,
    packet: GaussianPacket,
    time: float,
    grid: npt.ArrayLike,
) -> npt.NDArray[np.complex128]:
    """Exact ψ(x, t) for a Gaussian initial packet, valid through caustics."""
    hbar = config.hbar
    x = np.asarray(grid, dtype=float)
    modes = packet_modes(config, packet, time)
    offset = x - modes.position
    prefactor = (
        (math.pi * hbar) ** -0.25
        * abs(modes.width_q) ** -0.5
        * cmath.exp(-0.5j * modes.width_angle)
        * cmath.exp(1j * (modes.action / hbar + packet.momentum * packet.center))
    )
    exponent = 0.5j / hbar * (modes.width_p / modes.width_q) * offset**2 + 1j / hbar * (
        modes.momentum * offset
    )
    return prefactor * np.exp(exponent)


def l2_deviation(
    values: npt.ArrayLike, reference: npt.ArrayLike, spacing: float
) -> float:
    """Discrete L² norm of the difference on a uniform grid."""
    diff = np.asarray(values) - np.asarray(reference)
    return float(math.sqrt(spacing * float(np.sum(np.abs(diff) ** 2))))


def global_phase(values: npt.ArrayLike, reference: npt.ArrayLike, spacing: float) -> float:
    """arg⟨reference, values⟩, the best-fit constant phase between two states."""
    overlap = spacing * np.sum(np.conj(np.asarray(reference)) * np.asarray(values))
    if abs(overlap) == 0.0:
        raise NumericalError("States are orthogonal; the relative phase is undefined")
    return float(np.angle(overlap))


def hermite_functions(n_max: int, xi: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """
    Normalized Hermite functions ψ_0..ψ_{n_max} at scaled points ξ.

    ψ_{n+1} = sqrt(2/(n+1))·ξ·ψ_n − sqrt(n/(n+1))·ψ_{n−1}, starting from
    ψ_0 = π^(−1/4)exp(−ξ²/2); no factorials appear.
    """
    if n_max < 0:
        raise InvalidInputError(f"n_max must be non-negative, got {n_max}")
    points = np.atleast_1d(np.asarray(xi, dtype=float))
    table = np.zeros((n_max + 1, points.shape[0]))
    table[0] = math.pi**-0.25 * np.exp(-0.5 * points**2)
    if n_max >= 1:
        table[1] = math.sqrt(2.0) * points * table[0]
    for n in range(1, n_max):
        table[n + 1] = (
            math.sqrt(2.0 / (n + 1)) * points * table[n] - math.sqrt(n / (n + 1)) * table[n - 1]
        )
    return table


def eigenfunction_expansion_kernel(
    config: OscillatorConfig,
    n_max: int,
    smearing: GaussianPacket,
    x_final: float,
    tail_tolerance: float = 1e-10,
) -> ExpansionResult:
    """
    Σ_{n≤n_max} φ_n(x_F)·exp(−iω(n + 1/2)T)·∫φ_n(x_I)f(x_I)dx_I.

    The overlaps are trapezoid sums over the packet support, which converge
    spectrally for these smooth, decaying integrands.

    Raises:
        InvalidInputError: If ω = 0 or n_max < 1
        ExpansionTruncationError: If the weight 1 − Σ|c_n|² left outside the
            truncated basis exceeds tail_tolerance
    """
    if config.is_free:
        raise InvalidInputError("The Hermite expansion needs omega > 0")
    if n_max < 1:
        raise InvalidInputError(f"n_max must be at least 1, got {n_max}")
    length_inv = math.sqrt(config.mass * config.omega / config.hbar)

    lower, upper = smearing.support(EVOLUTION_PADDING)
    oscillation = math.sqrt(2.0 * n_max + 2.0) * length_inv + abs(smearing.momentum)
    spacing = min(smearing.width / 8.0, 0.25 * math.pi / oscillation)
    points = max(2048, math.ceil((upper - lower) / spacing) + 1)
    grid = np.linspace(lower, upper, points)
    h = grid[1] - grid[0]

    basis = length_inv**0.5 * hermite_functions(n_max, grid * length_inv)
    coefficients = h * (basis @ smearing.sample(grid))
    tail_weight = max(0.0, 1.0 - float(np.sum(np.abs(coefficients) ** 2)))
    if tail_weight > tail_tolerance:
        raise ExpansionTruncationError(
            f"n_max={n_max} leaves weight {tail_weight:.3e} outside the basis; increase n_max",
            tail_weight=tail_weight,
        )

    at_final = length_inv**0.5 * hermite_functions(n_max, [x_final * length_inv])[:, 0]
    energies = np.arange(n_max + 1) + 0.5
    phases = np.exp(-1j * energies * config.omega_time)
    value = complex(np.sum(at_final * phases * coefficients))
    notification_manager.debug(f"[Oracle] Hermite expansion n_max={n_max}: tail {tail_weight:.2e}")
    return ExpansionResult(
        value=value, n_max=n_max, tail_weight=tail_weight, coefficients=coefficients
    )
