"""
Kernel command for maslov-kernel.

Evaluates the finite-N kernel and the closed-form kernel at one time and one
pair of endpoints.
"""

import math
from typing import Any

from ..model.kernel_value import CausticDelta, RegularKernel
from ..model.oscillator import Discretization
from ..model.records import KernelRecord, OscillatorEcho
from ..model.run_config import RunConfig
from ..modules.kernel import (
    SINE_PROXIMITY,
    closed_form_kernel,
    discrete_kernel,
    kernel_difference,
)
from ..modules.output_manager import output_manager
from ..modules.spectral import caustic_classification
from ..utils.notifications import notification_manager


def _finite_n_fields(discrete: RegularKernel | None) -> dict[str, Any]:
    if discrete is None:
        return {}
    return {
        "discrete_magnitude": discrete.magnitude,
        "discrete_phase": discrete.phase,
        "discrete_maslov_index": discrete.maslov_index,
    }


class KernelCommand:
    """Command class for pointwise kernel evaluation."""

    @staticmethod
    def records(run_config: RunConfig) -> list[KernelRecord]:
        """
        Build the kernel record.

        At a caustic the closed form is a delta: the record carries its phase
        and parity, and the finite-N value is still reported. Just outside the
        caustic tolerance, where |sin ωT| < SINE_PROXIMITY, the finite-N value is
        not evaluated and only the closed form is reported.
        """
        config = run_config.oscillator()
        steps = run_config.resolved_steps()
        disc = Discretization.for_config(config, steps)
        tol = run_config.caustic_tol

        at_caustic, m_index = caustic_classification(config, tol)
        closed = closed_form_kernel(config, tol)
        near_caustic = (
            not at_caustic
            and not config.is_free
            and abs(math.sin(config.omega_time)) < SINE_PROXIMITY
        )
        discrete: RegularKernel | None = None
        if near_caustic:
            notification_manager.warning(
                f"[Kernel] ωT={config.omega_time:.12g} is within |sin ωT| < {SINE_PROXIMITY:g} "
                f"of a caustic: the finite-N columns are left empty"
            )
        else:
            discrete = discrete_kernel(config, disc, tol, allow_caustic=at_caustic)
        finite_n = _finite_n_fields(discrete)

        if isinstance(closed, CausticDelta):
            notification_manager.info(
                f"[Kernel] ωT = {m_index}π is a caustic: K = exp(−i{m_index}π/2)·δ(x_F − "
                f"{closed.parity:+d}·x_I)"
            )
            record = KernelRecord(
                **OscillatorEcho.echo(config),
                N=steps,
                type=closed.kind,
                m_index=m_index,
                maslov_l=m_index - 1,
                maslov_phase=closed.maslov_phase,
                parity=closed.parity,
                **finite_n,
            )
        else:
            record = KernelRecord(
                **OscillatorEcho.echo(config),
                N=steps,
                type=closed.kind,
                m_index=m_index,
                maslov_l=closed.maslov_index,
                magnitude=closed.magnitude,
                phase=closed.phase,
                maslov_phase=closed.maslov_phase,
                **finite_n,
                difference=None if discrete is None else kernel_difference(discrete, closed),
            )
        return [record]

    @staticmethod
    def run(run_config: RunConfig) -> None:
        """
        Evaluate the kernel and emit the record.

        Args:
            run_config: Validated run configuration
        """
        notification_manager.phase_separator("Kernel")
        output_manager.initialize(run_config.format, run_config.out)
        output_manager.emit(KernelCommand.records(run_config))
