"""
Discrete-time lattice action of the harmonic oscillator.

The action of a polygonal path x_0 = x_I, x_1, ..., x_N = x_F with midpoint
potential is

    S = Δt Σ_j [ (m/2)(Δx_j/Δt)² − (m/2)ω² x̄_j² ]

and equals (m/2Δt)(ᵗxAx + 2ᵗbx + c) in the interior points x_1..x_{N−1},
where A is tridiagonal with 2α on the diagonal and −β off it.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import numpy.typing as npt

from ..errors import InvalidInputError
from ..model.oscillator import Discretization, OscillatorConfig
from ..utils.notifications import notification_manager


@dataclass(frozen=True)
class DiscreteAction:
    """
    Compact form of the finite-N quadratic action.

    All diagonal entries of A are equal (and so are all off-diagonal ones), so
    the two scalars alpha and beta describe the whole matrix.
    """

    alpha: float
    beta: float
    size: int
    x_initial: float
    x_final: float

    @property
    def steps(self) -> int:
        return self.size + 1

    @property
    def diagonal(self) -> float:
        return 2.0 * self.alpha

    @property
    def off_diagonal(self) -> float:
        return -self.beta

    @cached_property
    def vector_b(self) -> npt.NDArray[np.float64]:
        b = np.zeros(self.size)
        # For N = 2 both endpoint couplings land on the single interior point.
        b[0] += -self.beta * self.x_initial
        b[-1] += -self.beta * self.x_final
        return b

    @property
    def scalar_c(self) -> float:
        return self.alpha * (self.x_initial**2 + self.x_final**2)

    def dense_matrix(self) -> npt.NDArray[np.float64]:
        """Materialize A; only meant for cross-checks at moderate N."""
        matrix = np.diag(np.full(self.size, self.diagonal))
        if self.size > 1:
            off = np.full(self.size - 1, self.off_diagonal)
            matrix += np.diag(off, 1) + np.diag(off, -1)
        return matrix

    def matvec(self, x: npt.ArrayLike) -> npt.NDArray[np.float64]:
        """A·x without building A."""
        x = np.asarray(x, dtype=float)
        if x.shape[0] != self.size:
            raise InvalidInputError(
                f"Vector of length {x.shape[0]} does not match matrix dimension {self.size}"
            )
        result = self.diagonal * x
        result[1:] += self.off_diagonal * x[:-1]
        result[:-1] += self.off_diagonal * x[1:]
        return result


def _check_lattice(config: OscillatorConfig, disc: Discretization) -> None:
    if disc.steps < 2:
        raise InvalidInputError(f"N must be at least 2, got {disc.steps}")
    if disc.time != config.time:
        raise InvalidInputError(
            f"Discretization covers T={disc.time} but the oscillator has T={config.time}"
        )


def build_action(config: OscillatorConfig, disc: Discretization) -> DiscreteAction:
    """
    Build the quadratic form of the lattice action.

    Args:
        config: Oscillator parameters and endpoints
        disc: Time lattice, N ≥ 2

    Returns:
        DiscreteAction with α = 1 − ω²Δt²/4 and β = 1 + ω²Δt²/4

    Raises:
        InvalidInputError: If N < 2 or the lattice and oscillator times differ
    """
    _check_lattice(config, disc)
    quarter = (config.omega * disc.delta_t) ** 2 / 4.0
    action = DiscreteAction(
        alpha=1.0 - quarter,
        beta=1.0 + quarter,
        size=disc.interior_size,
        x_initial=config.x_initial,
        x_final=config.x_final,
    )
    notification_manager.debug(
        f"[LatticeAction] N={disc.steps}: alpha={action.alpha:.17g}, beta={action.beta:.17g}"
    )
    return action


def action_of_path(
    config: OscillatorConfig, disc: Discretization, path: npt.ArrayLike
) -> float:
    """
    Evaluate the lattice action on a full path x_0..x_N.

    Raises:
        InvalidInputError: If the path length is not N+1 or its ends differ
            from the configured endpoints
    """
    _check_lattice(config, disc)
    path = np.asarray(path, dtype=float)
    if path.ndim != 1 or path.shape[0] != disc.steps + 1:
        raise InvalidInputError(
            f"Path must have N+1={disc.steps + 1} points, got shape {path.shape}"
        )
    if not (
        np.isclose(path[0], config.x_initial, rtol=1e-12, atol=1e-12)
        and np.isclose(path[-1], config.x_final, rtol=1e-12, atol=1e-12)
    ):
        raise InvalidInputError(
            f"Path endpoints ({path[0]}, {path[-1]}) do not match "
            f"x_I={config.x_initial}, x_F={config.x_final}"
        )

    dt = disc.delta_t
    increments = np.diff(path)
    midpoints = 0.5 * (path[1:] + path[:-1])
    kinetic = 0.5 * config.mass * np.sum((increments / dt) ** 2)
    potential = 0.5 * config.mass * config.omega**2 * np.sum(midpoints**2)
    return float(dt * (kinetic - potential))


def quadratic_form_value(
    action: DiscreteAction, interior: npt.ArrayLike, m: float, delta_t: float
) -> float:
    """
    Evaluate (m/2Δt)(ᵗxAx + 2ᵗbx + c) at the interior points.

    Raises:
        InvalidInputError: If the interior vector does not match the matrix
            dimension or m, Δt are not positive
    """
    if m <= 0 or delta_t <= 0:
        raise InvalidInputError("mass and delta_t must be positive")
    x = np.asarray(interior, dtype=float)
    if x.ndim != 1 or x.shape[0] != action.size:
        raise InvalidInputError(
            f"Interior vector of shape {x.shape} does not match dimension {action.size}"
        )
    form = x @ action.matvec(x) + 2.0 * (action.vector_b @ x) + action.scalar_c
    return float(m / (2.0 * delta_t) * form)


def assemble_path(
    config: OscillatorConfig, interior: npt.ArrayLike
) -> npt.NDArray[np.float64]:
    """Prepend x_I and append x_F to the interior points."""
    return np.concatenate(
        ([config.x_initial], np.asarray(interior, dtype=float), [config.x_final])
    )
