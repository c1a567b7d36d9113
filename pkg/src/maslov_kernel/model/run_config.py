"""
Pydantic models for maslov-kernel run configurations.

These models validate run-config JSON files against
run-config-schema.json, and the same models are filled from
command-line flags.
"""

import math
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .oscillator import GaussianPacket, OscillatorConfig


class OutputFormat(str, Enum):
    """Record serialization formats."""

    CSV = "csv"
    JSON = "json"


class TimeRange(BaseModel):
    """Inclusive range of propagation times written as `a:b:step`."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    start: float = Field(..., gt=0, description="First time of the range")
    stop: float = Field(..., gt=0, description="Last time of the range (inclusive)")
    step: float = Field(..., gt=0, description="Spacing between consecutive times")

    @model_validator(mode="after")
    def range_not_empty(self) -> "TimeRange":
        """Ensure stop does not precede start."""
        if self.stop < self.start:
            raise ValueError(f"empty time range: stop {self.stop} < start {self.start}")
        return self

    @staticmethod
    def split(text: str) -> dict[str, float]:
        """Fields of the 'a:b:step' shorthand."""
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"time range must read 'a:b:step', got '{text}'")
        start, stop, step = (float(p) for p in parts)
        return {"start": start, "stop": stop, "step": step}

    @classmethod
    def parse(cls, text: str) -> "TimeRange":
        return cls(**cls.split(text))

    def values(self) -> list[float]:
        """start, start + step, ... up to stop; the endpoint counts within 1e−9 steps."""
        count = math.floor((self.stop - self.start) / self.step + 1e-9)
        return [self.start + i * self.step for i in range(count + 1)]


class StepsLadder(BaseModel):
    """Geometric ladder of step counts written as `n0:n1:factor`."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    start: int = Field(..., ge=2, description="Smallest N")
    stop: int = Field(..., ge=2, description="Largest N (inclusive when reached)")
    factor: int = Field(2, ge=2, description="Ratio between consecutive N")

    @model_validator(mode="after")
    def ladder_not_empty(self) -> "StepsLadder":
        if self.stop < self.start:
            raise ValueError(f"empty N ladder: stop {self.stop} < start {self.start}")
        return self

    @staticmethod
    def split(text: str) -> dict[str, int]:
        """Fields of the 'n0:n1:factor' shorthand; the factor defaults to 2."""
        parts = text.split(":")
        if len(parts) not in (2, 3):
            raise ValueError(f"N ladder must read 'n0:n1:factor', got '{text}'")
        values = [int(p) for p in parts]
        fields = {"start": values[0], "stop": values[1]}
        if len(values) == 3:
            fields["factor"] = values[2]
        return fields

    @classmethod
    def parse(cls, text: str) -> "StepsLadder":
        return cls(**cls.split(text))

    def values(self) -> list[int]:
        ladder = [self.start]
        while ladder[-1] * self.factor <= self.stop:
            ladder.append(ladder[-1] * self.factor)
        return ladder


class RunConfig(BaseModel):
    """Everything a subcommand needs; CLI flags override file values."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    mass: float = Field(1.0, gt=0, description="Particle mass m")
    omega: float = Field(1.0, ge=0, description="Angular frequency ω")
    hbar: float = Field(1.0, gt=0, description="Reduced Planck constant ħ")
    time: float | None = Field(None, gt=0, description="Propagation time T")
    time_range: TimeRange | None = Field(
        None, description="Times to scan, given as an object or as 'a:b:step'"
    )
    steps: int | None = Field(None, ge=2, description="Number of time steps N")
    steps_ladder: StepsLadder | None = Field(
        None, description="N values to study, given as an object or as 'n0:n1:factor'"
    )
    x_initial: float = Field(0.0, description="Initial endpoint x_I")
    x_final: float = Field(0.0, description="Final endpoint x_F")
    packet_center: float = Field(0.0, description="Test-function center")
    packet_width: float = Field(1.0, gt=0, description="Test-function width")
    packet_momentum: float = Field(0.0, description="Test-function wavenumber")
    format: OutputFormat = Field(OutputFormat.CSV, description="Record format")
    out: str | None = Field(None, description="Output file; stdout when unset")
    seed: int | None = Field(None, ge=0, description="Seed for randomly drawn endpoints")
    samples: int = Field(1, ge=1, description="Endpoint pairs drawn when a seed is set")
    workers: int | str = Field(1, description="Concurrent sweep points, or 'max'")
    caustic_tol: float = Field(
        1e-7, gt=0, description="Distance of ωT/π from an integer that counts as a caustic"
    )
    n_max: int = Field(128, ge=1, description="Hermite terms for the expansion oracle")
    verify: bool = Field(False, description="Cross-check eigenvalues with the Sturm solver")

    @field_validator("time_range", mode="before")
    @classmethod
    def parse_time_range(cls, v: object) -> object:
        """Accept the 'a:b:step' shorthand."""
        if isinstance(v, str):
            return TimeRange.split(v)
        return v

    @field_validator("steps_ladder", mode="before")
    @classmethod
    def parse_steps_ladder(cls, v: object) -> object:
        """Accept the 'n0:n1:factor' shorthand."""
        if isinstance(v, str):
            return StepsLadder.split(v)
        return v

    @field_validator("workers")
    @classmethod
    def workers_valid(cls, v: int | str) -> int | str:
        """Ensure workers is a positive integer or 'max'."""
        if isinstance(v, str):
            if v.lower() == "max":
                return "max"
            if v.isdigit():
                v = int(v)
            else:
                raise ValueError(f"workers must be a positive integer or 'max', got '{v}'")
        if v < 1:
            raise ValueError("workers must be at least 1")
        return v

    def oscillator(self, time: float | None = None) -> OscillatorConfig:
        """
        Physical parameters at the configured (or given) time.

        Raises:
            ValueError: If no time is available
        """
        resolved = time if time is not None else self.time
        if resolved is None:
            raise ValueError("a propagation time is required (--T)")
        return OscillatorConfig(
            mass=self.mass,
            omega=self.omega,
            hbar=self.hbar,
            time=resolved,
            x_initial=self.x_initial,
            x_final=self.x_final,
        )

    def packet(self) -> GaussianPacket:
        return GaussianPacket(
            center=self.packet_center,
            width=self.packet_width,
            momentum=self.packet_momentum,
        )

    def resolved_steps(self, default: int = 256) -> int:
        return self.steps if self.steps is not None else default

    def ladder(self, default: StepsLadder | None = None) -> list[int]:
        """
        N values from the ladder, else the single N, else the default ladder.

        Raises:
            ValueError: If none of the three is available
        """
        if self.steps_ladder is not None:
            return self.steps_ladder.values()
        if self.steps is not None:
            return [self.steps]
        if default is not None:
            return default.values()
        raise ValueError("an N ladder is required (--N-ladder)")

    def times(self) -> list[float]:
        """
        Times of the range, else the single T.

        Raises:
            ValueError: If neither is set
        """
        if self.time_range is not None:
            return self.time_range.values()
        if self.time is not None:
            return [self.time]
        raise ValueError("a time range is required (--T-range)")
