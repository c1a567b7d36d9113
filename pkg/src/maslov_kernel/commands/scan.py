"""
Scan command for maslov-kernel.

Sweeps the propagation time, classifying each point and evaluating the
finite-N kernel, so that the −π/2 phase drop at each caustic shows up in the
unwrapped phase column.
"""

import math
from dataclasses import dataclass

from ..errors import CausticProximityError
from ..model.oscillator import Discretization
from ..model.records import OscillatorEcho, ScanRecord
from ..model.run_config import RunConfig
from ..modules.kernel import SINE_PROXIMITY, discrete_kernel
from ..modules.output_manager import output_manager
from ..modules.spectral import classify
from ..runner import SweepRunner
from ..utils.notifications import notification_manager
from ..utils.numerics import unwrap_phases


@dataclass(frozen=True)
class ScanPoint:
    """Raw result at one time, before phases are unwrapped along the scan."""

    time: float
    m_index: int
    maslov_l: int
    caustic: bool
    count_stable: bool
    phase: float | None
    magnitude: float | None
    maslov_phase: float
    zero_crossing: float
    negative_count: int


def evaluate_point(run_config: RunConfig, time: float) -> ScanPoint:
    """Classify one time and, away from caustics, evaluate K_N there."""
    config = run_config.oscillator(time)
    disc = Discretization.for_config(config, run_config.resolved_steps())
    spectrum = classify(config, disc, run_config.caustic_tol, strict=False)
    near_caustic = not config.is_free and abs(math.sin(config.omega_time)) < SINE_PROXIMITY

    if spectrum.at_caustic or near_caustic:
        nearest = round(config.half_periods)
        return ScanPoint(
            time=time,
            m_index=nearest,
            maslov_l=spectrum.maslov_l,
            caustic=True,
            count_stable=spectrum.count_stable,
            phase=None,
            magnitude=None,
            maslov_phase=-nearest * math.pi / 2.0,
            zero_crossing=spectrum.zero_crossing,
            negative_count=spectrum.negative_count,
        )

    try:
        kernel = discrete_kernel(config, disc, run_config.caustic_tol, strict=False)
    except CausticProximityError:
        # Only reachable through the σ-phase guard in the fluctuation factor.
        notification_manager.warning(f"[Kernel] T={time:.12g} flagged as caustic at N={disc.steps}")
        return ScanPoint(
            time=time,
            m_index=spectrum.m_index,
            maslov_l=spectrum.maslov_l,
            caustic=True,
            count_stable=spectrum.count_stable,
            phase=None,
            magnitude=None,
            maslov_phase=-spectrum.negative_count * math.pi / 2.0,
            zero_crossing=spectrum.zero_crossing,
            negative_count=spectrum.negative_count,
        )
    return ScanPoint(
        time=time,
        m_index=spectrum.m_index,
        maslov_l=spectrum.maslov_l,
        caustic=False,
        count_stable=spectrum.count_stable,
        phase=kernel.phase,
        magnitude=kernel.magnitude,
        maslov_phase=kernel.maslov_phase,
        zero_crossing=spectrum.zero_crossing,
        negative_count=spectrum.negative_count,
    )


class ScanCommand:
    """Command class for time scans."""

    @staticmethod
    def records(run_config: RunConfig) -> list[ScanRecord]:
        times = run_config.times()
        runner = SweepRunner(run_config.workers)
        points = runner.run(lambda t: evaluate_point(run_config, t), times)

        regular = [p.phase for p in points if p.phase is not None]
        unwrapped = iter(unwrap_phases(regular).tolist()) if regular else iter(())
        steps = run_config.resolved_steps()

        records: list[ScanRecord] = []
        for point in points:
            config = run_config.oscillator(point.time)
            records.append(
                ScanRecord(
                    **OscillatorEcho.echo(config),
                    N=steps,
                    M=point.m_index,
                    L=point.maslov_l,
                    caustic=point.caustic,
                    count_stable=point.count_stable,
                    phase=next(unwrapped) if point.phase is not None else None,
                    magnitude=point.magnitude,
                    maslov_phase=point.maslov_phase,
                    x0N=point.zero_crossing,
                    negative_count=point.negative_count,
                )
            )

        flagged = sum(1 for p in points if p.caustic)
        notification_manager.success(
            f"[SweepRunner] Scanned {len(points)} time(s), {flagged} caustic row(s) flagged"
        )
        return records

    @staticmethod
    def run(run_config: RunConfig) -> None:
        notification_manager.phase_separator("Scan")
        output_manager.initialize(run_config.format, run_config.out)
        output_manager.emit(ScanCommand.records(run_config))
