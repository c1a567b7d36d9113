"""
Smear command for maslov-kernel.

Integrates the kernel against a Gaussian test function, the only meaningful
evaluation at a caustic, and compares the result with the delta-limit (or
closed-form) reference and with the Hermite expansion.
"""

from ..errors import ExpansionTruncationError
from ..model.oscillator import OscillatorConfig
from ..model.records import PacketEcho, SmearRecord
from ..model.run_config import RunConfig
from ..modules.caustic import delta_prediction, regular_reference, smeared_kernel
from ..modules.kernel import free_gaussian_kernel
from ..modules.oracle import ExpansionResult, eigenfunction_expansion_kernel
from ..modules.output_manager import output_manager
from ..modules.spectral import caustic_classification
from ..runner import SweepRunner
from ..utils.notifications import notification_manager

EXPANSION_TAIL_TOLERANCE = 1e-10


def _expansion(run_config: RunConfig, config: OscillatorConfig) -> ExpansionResult | None:
    if config.is_free:
        return None
    try:
        return eigenfunction_expansion_kernel(
            config,
            run_config.n_max,
            run_config.packet(),
            config.x_final,
            tail_tolerance=EXPANSION_TAIL_TOLERANCE,
        )
    except ExpansionTruncationError as e:
        notification_manager.warning(f"[Oracle] Expansion column left empty: {e}")
        return None


class SmearCommand:
    """Command class for smeared kernel evaluation."""

    @staticmethod
    def records(run_config: RunConfig) -> list[SmearRecord]:
        """
        One record per N of the ladder, or a single continuum record when
        neither N nor a ladder is given.
        """
        config = run_config.oscillator()
        packet = run_config.packet()
        x_final = config.x_final
        tol = run_config.caustic_tol

        at_caustic, m_index = caustic_classification(config, tol)
        if at_caustic:
            reference = delta_prediction(config, packet, x_final, m_index)
        elif config.is_free:
            reference = free_gaussian_kernel(config).smear_gaussian(packet, x_final)
        else:
            reference = regular_reference(config, packet, x_final)
        expansion = _expansion(run_config, config)

        ladder: list[int | None] = (
            list(run_config.ladder())
            if run_config.steps_ladder is not None or run_config.steps is not None
            else [None]
        )
        runner = SweepRunner(run_config.workers)
        results = runner.run(
            lambda n: smeared_kernel(config, packet, x_final, steps=n, caustic_tol=tol), ladder
        )

        echo = PacketEcho.echo_packet(config, packet)
        records: list[SmearRecord] = []
        for n, result in zip(ladder, results):
            records.append(
                SmearRecord(
                    **echo,
                    N=n,
                    type="caustic_delta" if at_caustic else "regular",
                    smeared_real=result.value.real,
                    smeared_imag=result.value.imag,
                    quadrature_error=result.error,
                    reference_real=reference.real,
                    reference_imag=reference.imag,
                    deviation=abs(result.value - reference),
                    expansion_real=expansion.value.real if expansion else None,
                    expansion_imag=expansion.value.imag if expansion else None,
                    expansion_deviation=abs(result.value - expansion.value) if expansion else None,
                    expansion_tail=expansion.tail_weight if expansion else None,
                )
            )

        last = records[-1]
        notification_manager.success(
            f"[Caustic] Deviation from the reference at N={last.N or '∞'}: {last.deviation:.3e}"
        )
        return records

    @staticmethod
    def run(run_config: RunConfig) -> None:
        notification_manager.phase_separator("Smeared kernel")
        output_manager.initialize(run_config.format, run_config.out)
        output_manager.emit(SmearCommand.records(run_config))
