"""
Kernel values: a regular complex amplitude or the delta form at a caustic.

The Maslov contribution is always carried as its own phase term; no complex
square root of a determinant is ever taken to build these values.
"""

import cmath
import math
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field


class RegularKernel(BaseModel):
    """K = magnitude · exp(i·phase), with phase including maslov_phase."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["regular"] = "regular"
    magnitude: float = Field(..., ge=0, description="|K|")
    phase: float = Field(..., description="Total phase of K in radians")
    maslov_phase: float = Field(..., description="Maslov contribution −Lπ/2")
    maslov_index: int = Field(..., ge=0, description="Maslov index L")

    @property
    def amplitude(self) -> complex:
        return self.magnitude * cmath.exp(1j * self.phase)


class CausticDelta(BaseModel):
    """K = exp(−iMπ/2) · δ(x_F − (−1)^M x_I)."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["caustic_delta"] = "caustic_delta"
    m_index: int = Field(..., ge=1, description="Caustic index M with ωT = Mπ")
    maslov_phase: float = Field(..., description="Phase −Mπ/2 of the delta")
    parity: Literal[-1, 1] = Field(..., description="(−1)^M")

    @classmethod
    def at(cls, m_index: int) -> "CausticDelta":
        return cls(
            m_index=m_index,
            maslov_phase=-m_index * math.pi / 2.0,
            parity=1 if m_index % 2 == 0 else -1,
        )

    @property
    def phase_factor(self) -> complex:
        return cmath.exp(1j * self.maslov_phase)


KernelValue = Annotated[RegularKernel | CausticDelta, Field(discriminator="kind")]
