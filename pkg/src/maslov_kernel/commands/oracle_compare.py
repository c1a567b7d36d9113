"""
Oracle-compare command for maslov-kernel.

Evaluates the N-step kernel three independent ways: brute-force Fresnel
quadrature, the closed finite-N formula and dense linear algebra.
"""

from dataclasses import dataclass

import numpy as np

from ..model.oscillator import Discretization, OscillatorConfig
from ..model.records import OracleRecord, OscillatorEcho
from ..model.run_config import RunConfig
from ..modules.kernel import discrete_kernel
from ..modules.oracle import brute_force_fresnel, quadratic_form_kernel
from ..modules.output_manager import output_manager
from ..runner import SweepRunner
from ..utils.notifications import notification_manager

SMALL_LATTICES = (2, 3, 4)
ENDPOINT_RANGE = 1.0


@dataclass(frozen=True)
class OraclePoint:
    config: OscillatorConfig
    steps: int


def endpoint_pairs(run_config: RunConfig) -> list[tuple[float, float]]:
    """The configured endpoints, or `samples` pairs drawn from [−1, 1]² when seeded."""
    if run_config.seed is None:
        return [(run_config.x_initial, run_config.x_final)]
    rng = np.random.default_rng(run_config.seed)
    draws = rng.uniform(-ENDPOINT_RANGE, ENDPOINT_RANGE, size=(run_config.samples, 2))
    return [(float(a), float(b)) for a, b in draws]


def compare_point(point: OraclePoint) -> OracleRecord:
    config, steps = point.config, point.steps
    disc = Discretization.for_config(config, steps)
    fresnel = brute_force_fresnel(config, disc)
    discrete = discrete_kernel(config, disc, strict=False).amplitude
    dense = quadratic_form_kernel(config, disc).amplitude
    scale = abs(discrete)
    return OracleRecord(
        **OscillatorEcho.echo(config),
        N=steps,
        fresnel_real=fresnel.value.real,
        fresnel_imag=fresnel.value.imag,
        discrete_real=discrete.real,
        discrete_imag=discrete.imag,
        quadratic_form_real=dense.real,
        quadratic_form_imag=dense.imag,
        fresnel_gap=abs(fresnel.value - discrete) / scale,
        quadratic_form_gap=abs(dense - discrete) / scale,
        extrapolation_residual=fresnel.residuals[-1],
    )


class OracleCompareCommand:
    """Command class for the three-way oracle comparison."""

    @staticmethod
    def records(run_config: RunConfig) -> list[OracleRecord]:
        base = run_config.oscillator()
        lattices = [run_config.steps] if run_config.steps is not None else list(SMALL_LATTICES)
        points = [
            OraclePoint(config=base.with_endpoints(x_i, x_f), steps=n)
            for x_i, x_f in endpoint_pairs(run_config)
            for n in lattices
        ]
        runner = SweepRunner(run_config.workers)
        records = runner.run(compare_point, points)

        worst = max(max(r.fresnel_gap, r.quadratic_form_gap) for r in records)
        notification_manager.success(
            f"[Oracle] {len(records)} comparison(s), largest relative gap {worst:.3e}"
        )
        return records

    @staticmethod
    def run(run_config: RunConfig) -> None:
        notification_manager.phase_separator("Oracle comparison")
        output_manager.initialize(run_config.format, run_config.out)
        output_manager.emit(OracleCompareCommand.records(run_config))
