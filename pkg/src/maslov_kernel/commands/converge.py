"""
Converge command for maslov-kernel.

Measures |K_N − K| along an N ladder and fits the order of convergence.
"""

from ..errors import InvalidInputError
from ..model.records import ConvergeRecord, OscillatorEcho
from ..model.run_config import RunConfig, StepsLadder
from ..modules.kernel import convergence_study
from ..modules.output_manager import output_manager
from ..modules.spectral import stabilization_steps
from ..utils.notifications import notification_manager

DEFAULT_LADDER = StepsLadder(start=64, stop=4096, factor=2)


class ConvergeCommand:
    """Command class for convergence studies in N."""

    @staticmethod
    def records(run_config: RunConfig) -> list[ConvergeRecord]:
        """
        Raises:
            InvalidInputError: At a caustic, where only smeared values converge
        """
        config = run_config.oscillator()
        ladder = run_config.ladder(DEFAULT_LADDER)
        smallest = stabilization_steps(config, run_config.caustic_tol)
        if min(ladder) < smallest:
            raise InvalidInputError(
                f"The negative count settles only at N={smallest}; "
                f"start the ladder there or above"
            )

        study = convergence_study(config, ladder, run_config.caustic_tol)
        echo = OscillatorEcho.echo(config)
        ratios = {
            study.steps[i + 1]: study.errors[i + 1] / study.errors[i]
            for i in range(len(study.steps) - 1)
            if study.errors[i] > 0.0
        }
        records = [
            ConvergeRecord(
                **echo,
                N=n,
                error=error,
                error_ratio=ratios.get(n),
                order=study.order if i == len(study.steps) - 1 else None,
            )
            for i, (n, error) in enumerate(zip(study.steps, study.errors))
        ]
        if study.order is not None:
            notification_manager.success(f"[Kernel] Fitted order {study.order:.4f}")
        else:
            notification_manager.info("[Kernel] Errors vanish at every N; no order fitted")
        return records

    @staticmethod
    def run(run_config: RunConfig) -> None:
        notification_manager.phase_separator("Convergence")
        output_manager.initialize(run_config.format, run_config.out)
        output_manager.emit(ConvergeCommand.records(run_config))
