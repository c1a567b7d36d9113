"""
Output records emitted by the subcommands.

Every record repeats the parameters it was computed from, so a CSV row or a
JSON object can be interpreted without the command line that produced it.
Complex numbers are split into real and imaginary columns.
"""

from pydantic import BaseModel, ConfigDict, Field

from .oscillator import GaussianPacket, OscillatorConfig


class OscillatorEcho(BaseModel):
    """Physical parameters shared by all records."""

    model_config = ConfigDict(extra="forbid")

    mass: float = Field(..., description="Particle mass m")
    omega: float = Field(..., description="Angular frequency ω")
    hbar: float = Field(..., description="Reduced Planck constant ħ")
    T: float = Field(..., description="Propagation time")
    x_initial: float = Field(..., description="Initial endpoint x_I")
    x_final: float = Field(..., description="Final endpoint x_F")

    @staticmethod
    def echo(config: OscillatorConfig) -> dict[str, float]:
        return {
            "mass": config.mass,
            "omega": config.omega,
            "hbar": config.hbar,
            "T": config.time,
            "x_initial": config.x_initial,
            "x_final": config.x_final,
        }


class PacketEcho(OscillatorEcho):
    """Physical parameters plus the test function."""

    packet_center: float = Field(..., description="Test-function center")
    packet_width: float = Field(..., description="Test-function width")
    packet_momentum: float = Field(..., description="Test-function wavenumber")

    @staticmethod
    def echo_packet(config: OscillatorConfig, packet: GaussianPacket) -> dict[str, float]:
        return {
            **OscillatorEcho.echo(config),
            "packet_center": packet.center,
            "packet_width": packet.width,
            "packet_momentum": packet.momentum,
        }


class KernelRecord(OscillatorEcho):
    """Finite-N and closed-form kernel at one (T, x_I, x_F)."""

    N: int
    type: str = Field(..., description="'regular' or 'caustic_delta'")
    m_index: int
    maslov_l: int
    magnitude: float | None = Field(None, description="Closed-form |K|")
    phase: float | None = Field(None, description="Closed-form phase of K")
    maslov_phase: float
    parity: int | None = Field(None, description="(−1)^M for delta records")
    discrete_magnitude: float | None = None
    discrete_phase: float | None = None
    discrete_maslov_index: int | None = None
    difference: float | None = Field(None, description="|K_N − K|")


class SpectrumRecord(OscillatorEcho):
    """One eigenvalue of the fluctuation matrix."""

    N: int
    k: int
    eigenvalue: float
    negative: bool
    numeric_eigenvalue: float | None = None
    zero_crossing: float
    negative_count: int
    maslov_l: int
    at_caustic: bool


class ScanRecord(OscillatorEcho):
    """Finite-N kernel and classification at one point of a T scan."""

    N: int
    M: int
    L: int
    caustic: bool
    count_stable: bool
    phase: float | None = Field(None, description="Unwrapped phase of K_N")
    magnitude: float | None = None
    maslov_phase: float
    x0N: float
    negative_count: int


class ConvergeRecord(OscillatorEcho):
    """|K_N − K| at one N; the fitted order is on the last row only."""

    N: int
    error: float
    error_ratio: float | None = Field(None, description="Error relative to the previous N")
    order: float | None = None


class SmearRecord(PacketEcho):
    """Smeared kernel at one N against its references."""

    N: int | None = Field(None, description="Empty for the continuum kernel")
    type: str
    smeared_real: float
    smeared_imag: float
    quadrature_error: float
    reference_real: float
    reference_imag: float
    deviation: float
    expansion_real: float | None = None
    expansion_imag: float | None = None
    expansion_deviation: float | None = None
    expansion_tail: float | None = None


class OracleRecord(OscillatorEcho):
    """Three independent evaluations of the N-step kernel."""

    N: int
    fresnel_real: float
    fresnel_imag: float
    discrete_real: float
    discrete_imag: float
    quadratic_form_real: float
    quadratic_form_imag: float
    fresnel_gap: float = Field(..., description="Relative gap fresnel vs discrete")
    quadratic_form_gap: float = Field(..., description="Relative gap dense vs discrete")
    extrapolation_residual: float
