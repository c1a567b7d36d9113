"""
Spectrum command for maslov-kernel.

Lists the eigenvalues of the fluctuation matrix with their classification and
shows a summary report on stderr.
"""

from ..model.oscillator import Discretization
from ..model.records import OscillatorEcho, SpectrumRecord
from ..model.run_config import RunConfig
from ..modules.lattice_action import build_action
from ..modules.output_manager import output_manager
from ..modules.spectral import classify, eigenvalues_numeric
from ..utils.notifications import notification_manager


class SpectrumCommand:
    """Command class for fluctuation-spectrum reports."""

    @staticmethod
    def records(run_config: RunConfig, show_report: bool = True) -> list[SpectrumRecord]:
        config = run_config.oscillator()
        disc = Discretization.for_config(config, run_config.resolved_steps())
        spectrum = classify(config, disc, run_config.caustic_tol, strict=False)

        numeric = None
        if run_config.verify:
            numeric = eigenvalues_numeric(build_action(config, disc))
            gap = float(abs(numeric - spectrum.eigenvalues).max())
            notification_manager.info(f"[Spectral] Sturm bisection vs closed form: max gap {gap:.3e}")

        if show_report:
            notification_manager.spectrum_report(config, spectrum)
        if not spectrum.count_stable:
            notification_manager.warning(
                f"[Spectral] {spectrum.negative_count} negative eigenvalue(s) at N={disc.steps}, "
                f"L={spectrum.maslov_l}: N is too small for the asymptotic count"
            )

        echo = OscillatorEcho.echo(config)
        return [
            SpectrumRecord(
                **echo,
                N=disc.steps,
                k=k + 1,
                eigenvalue=float(value),
                negative=bool(value < 0.0),
                numeric_eigenvalue=float(numeric[k]) if numeric is not None else None,
                zero_crossing=spectrum.zero_crossing,
                negative_count=spectrum.negative_count,
                maslov_l=spectrum.maslov_l,
                at_caustic=spectrum.at_caustic,
            )
            for k, value in enumerate(spectrum.eigenvalues)
        ]

    @staticmethod
    def run(run_config: RunConfig) -> None:
        notification_manager.phase_separator("Spectrum")
        output_manager.initialize(run_config.format, run_config.out)
        output_manager.emit(SpectrumCommand.records(run_config))
