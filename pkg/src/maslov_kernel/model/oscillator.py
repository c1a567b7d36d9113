"""
Pydantic models for the physical parameters of a propagator evaluation.

These models carry the oscillator, the time lattice and the Gaussian test
functions used for smeared (distributional) evaluation.
"""

import math
from typing import Any

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field


class OscillatorConfig(BaseModel):
    """Physical parameters m, ω, ħ, T and the endpoints x_I, x_F."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    mass: float = Field(1.0, gt=0, description="Particle mass m")
    omega: float = Field(1.0, ge=0, description="Angular frequency ω (rad/time)")
    hbar: float = Field(1.0, gt=0, description="Reduced Planck constant ħ")
    time: float = Field(..., gt=0, description="Propagation time T")
    x_initial: float = Field(0.0, description="Initial endpoint x_I")
    x_final: float = Field(0.0, description="Final endpoint x_F")

    @property
    def omega_time(self) -> float:
        """ωT."""
        return self.omega * self.time

    @property
    def half_periods(self) -> float:
        """ωT/π, whose integer part is the caustic count M."""
        return self.omega * self.time / math.pi

    @property
    def m_index(self) -> int:
        """M = floor(ωT/π)."""
        return math.floor(self.half_periods)

    @property
    def is_free(self) -> bool:
        return self.omega == 0.0

    def with_endpoints(self, x_initial: float, x_final: float) -> "OscillatorConfig":
        """Return a copy with new endpoints."""
        return self.model_copy(update={"x_initial": x_initial, "x_final": x_final})

    def with_time(self, time: float) -> "OscillatorConfig":
        """Return a copy with a new propagation time."""
        return self.model_copy(update={"time": time})


class Discretization(BaseModel):
    """Uniform time lattice with N steps over [0, T]."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    steps: int = Field(..., ge=2, description="Number of time steps N")
    time: float = Field(..., gt=0, description="Total time T the lattice covers")

    @property
    def delta_t(self) -> float:
        """Δt = T/N, always derived from T and N."""
        return self.time / self.steps

    @property
    def interior_size(self) -> int:
        """Dimension N−1 of the fluctuation matrix."""
        return self.steps - 1

    @classmethod
    def for_config(cls, config: OscillatorConfig, steps: int) -> "Discretization":
        return cls(steps=steps, time=config.time)


class GaussianPacket(BaseModel):
    """
    Unit-norm Gaussian test function.

    f(x) = (πw²)^(−1/4) · exp(−(x − c)²/(2w²) + ikx). The expression is entire,
    so the packet can be evaluated at complex arguments (needed on rotated
    integration contours).
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    center: float = Field(0.0, description="Packet center c")
    width: float = Field(1.0, gt=0, description="Packet width w")
    momentum: float = Field(0.0, description="Plane-wave wavenumber k")

    @property
    def normalization(self) -> float:
        return (math.pi * self.width**2) ** -0.25

    @property
    def max_value(self) -> float:
        """sup |f| over the real line."""
        return self.normalization

    def __call__(self, x: Any) -> Any:
        """Evaluate f at real or complex points (scalar or array)."""
        x = np.asarray(x)
        exponent = -((x - self.center) ** 2) / (2.0 * self.width**2) + 1j * (
            self.momentum * x
        )
        value = self.normalization * np.exp(exponent)
        if value.ndim == 0:
            return complex(value)
        return value

    def support(self, sigmas: float = 8.0) -> tuple[float, float]:
        """Interval outside which |f| is below exp(−sigmas²/2) of its peak."""
        return (self.center - sigmas * self.width, self.center + sigmas * self.width)

    def sample(self, grid: npt.NDArray[np.float64]) -> npt.NDArray[np.complex128]:
        """Evaluate on a real grid, always returning an array."""
        return np.asarray(self(np.asarray(grid, dtype=float)), dtype=complex)

    @classmethod
    def coherent(
        cls, config: OscillatorConfig, center: float, momentum: float = 0.0
    ) -> "GaussianPacket":
        """Packet of width sqrt(ħ/mω), which moves rigidly under the oscillator."""
        if config.omega == 0.0:
            raise ValueError("coherent packets need omega > 0")
        width = math.sqrt(config.hbar / (config.mass * config.omega))
        return cls(center=center, width=width, momentum=momentum)
