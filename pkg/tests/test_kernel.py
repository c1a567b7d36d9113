"""
Tests for the finite-N and closed-form propagators.

These tests cover the fluctuation factor, the classical action (both routes),
the structural symmetries of the kernel and its convergence in N.
"""

# pyright: basic

import cmath
import math

import numpy as np
import pytest

from maslov_kernel.errors import CausticProximityError, InvalidInputError
from maslov_kernel.model.kernel_value import CausticDelta, RegularKernel
from maslov_kernel.model.oscillator import Discretization, GaussianPacket, OscillatorConfig
from maslov_kernel.modules.kernel import (
    ActionMethod,
    classical_action,
    closed_form_kernel,
    continuum_gaussian_kernel,
    convergence_study,
    determinant_consistency,
    determinant_sequence,
    discrete_kernel,
    fluctuation_factor,
    free_gaussian_kernel,
    inverse_corner_entries,
    kernel_difference,
    sigma,
)
from maslov_kernel.modules.lattice_action import build_action
from maslov_kernel.modules.spectral import classify
from maslov_kernel.utils.numerics import complex_quad

KERNEL_SEED = 4242


def _seeded_regular_configs(count: int) -> list[OscillatorConfig]:
    """Random configurations whose ωT/π stays at least 0.05 from an integer."""
    rng = np.random.default_rng(KERNEL_SEED)
    configs: list[OscillatorConfig] = []
    while len(configs) < count:
        mass, omega, hbar = rng.uniform(0.5, 2.0, size=3)
        half_periods = rng.uniform(0.05, 3.95)
        if abs(half_periods - round(half_periods)) < 0.05:
            continue
        x_initial, x_final = rng.uniform(-1.0, 1.0, size=2)
        configs.append(
            OscillatorConfig(
                mass=mass,
                omega=omega,
                hbar=hbar,
                time=half_periods * math.pi / omega,
                x_initial=x_initial,
                x_final=x_final,
            )
        )
    return configs


class TestSigmaAndMinors:
    """Test σ(N) and the leading-minor recursion."""

    @pytest.mark.parametrize("n", [1, 2, 5, 40])
    def test_sigma_matches_power(self, n: int):
        """Test σ(n) against (1 + iωT/2n)^n computed directly."""
        config = OscillatorConfig(omega=1.3, time=2.2)
        expected = (1.0 + 1j * config.omega_time / (2.0 * n)) ** n

        assert sigma(config, n).value == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("omega_time", [0.3, math.pi, 7.9])
    @pytest.mark.parametrize("n", [1, 3, 64, 4096])
    def test_sigma_modulus_and_argument(self, omega_time: float, n: int):
        """Test |σ|² = (1 + a²)^n ≥ 1 and 0 < arg σ < ωT/2."""
        value = sigma(OscillatorConfig(omega=1.0, time=omega_time), n)
        a = omega_time / (2.0 * n)

        assert value.squared_magnitude >= 1.0
        assert value.squared_magnitude == pytest.approx((1.0 + a * a) ** n, rel=1e-12)
        assert 0.0 < value.arg < omega_time / 2.0

    def test_sigma_tends_to_i_at_half_period(self):
        """Test σ(N) → i at ωT = π."""
        config = OscillatorConfig(omega=1.0, time=math.pi)
        gaps = [abs(sigma(config, n).value - 1j) for n in (10, 100, 1000, 10**6)]

        assert all(b < a for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < 1e-5

    def test_sigma_rejects_zero(self):
        """Test that σ needs n ≥ 1."""
        with pytest.raises(InvalidInputError, match="n >= 1"):
            sigma(OscillatorConfig(time=1.0), 0)

    def test_first_minors(self, regular_config: OscillatorConfig):
        """Test D_0 = 1, D_1 = 2α and D_2 = 4α² − β²."""
        disc = Discretization.for_config(regular_config, 8)
        action = build_action(regular_config, disc)
        minors = determinant_sequence(regular_config, disc)

        assert len(minors) == 8
        assert minors.value(0) == 1.0
        assert minors.value(1) == pytest.approx(2.0 * action.alpha, rel=1e-14)
        assert minors.value(2) == pytest.approx(
            4.0 * action.alpha**2 - action.beta**2, rel=1e-12
        )

    def test_last_minor_is_determinant(self, regular_config: OscillatorConfig):
        """Test D_{N−1} against a dense determinant."""
        disc = Discretization.for_config(regular_config, 12)
        dense = np.linalg.det(build_action(regular_config, disc).dense_matrix())

        assert determinant_sequence(regular_config, disc).value(11) == pytest.approx(dense, rel=1e-10)

    def test_inverse_corners_match_dense_inverse(self, regular_config: OscillatorConfig):
        """Test (A⁻¹)_{11} and (A⁻¹)_{1,N−1} against numpy's inverse."""
        disc = Discretization.for_config(regular_config, 7)
        inverse = np.linalg.inv(build_action(regular_config, disc).dense_matrix())
        diagonal_entry, corner_entry = inverse_corner_entries(regular_config, disc)

        assert diagonal_entry == pytest.approx(inverse[0, 0], rel=1e-10)
        assert corner_entry == pytest.approx(inverse[0, -1], rel=1e-10)

    @pytest.mark.parametrize("steps", [3, 64, 2048])
    def test_determinant_consistency(self, regular_config: OscillatorConfig, steps: int):
        """Test that the recursion and the σ closed form agree to 1e−10."""
        disc = Discretization.for_config(regular_config, steps)

        assert determinant_consistency(regular_config, disc) < 1e-10


class TestFluctuationFactor:
    """Test Q against dense linear algebra."""

    def test_matches_dense_determinant(self, regular_config: OscillatorConfig):
        """Test |Q| = sqrt(m/2πħΔt)·|det A|^(−1/2) with the phase −π/4 − π/2."""
        disc = Discretization.for_config(regular_config, 12)
        dense = build_action(regular_config, disc).dense_matrix()
        prefactor = regular_config.mass / (2.0 * math.pi * regular_config.hbar * disc.delta_t)

        factor = fluctuation_factor(regular_config, disc, classify(regular_config, disc))

        assert factor.maslov_index == int(np.count_nonzero(np.linalg.eigvalsh(dense) < 0.0)) == 1
        assert factor.magnitude == pytest.approx(
            math.sqrt(prefactor / abs(np.linalg.det(dense))), rel=1e-10
        )
        assert factor.phase == pytest.approx(-3.0 * math.pi / 4.0)

    def test_free_particle(self, free_config: OscillatorConfig):
        """Test Q = sqrt(m/2πħNΔt)·e^(−iπ/4) for ω = 0."""
        disc = Discretization.for_config(free_config, 5)

        factor = fluctuation_factor(free_config, disc, classify(free_config, disc))

        assert factor.value == pytest.approx(
            cmath.exp(-0.25j * math.pi) / math.sqrt(2.0 * math.pi), rel=1e-12
        )


class TestClassicalAction:
    """Test the two routes to the classical action."""

    @pytest.mark.parametrize("steps", [2, 5, 100, 3000])
    def test_methods_agree(self, regular_config: OscillatorConfig, steps: int):
        """Test the recursion route against the σ route."""
        disc = Discretization.for_config(regular_config, steps)
        by_recursion = classical_action(regular_config, disc, ActionMethod.RECURSION)
        by_sigma = classical_action(regular_config, disc, ActionMethod.SIGMA)

        assert by_sigma == pytest.approx(by_recursion, rel=1e-9)

    def test_minimum_of_quadratic_form(self, regular_config: OscillatorConfig):
        """Test S_c = (m/2Δt)(c − ᵗbA⁻¹b) with a dense solve."""
        disc = Discretization.for_config(regular_config, 9)
        action = build_action(regular_config, disc)
        solution = np.linalg.solve(action.dense_matrix(), action.vector_b)
        expected = (
            regular_config.mass
            / (2.0 * disc.delta_t)
            * (action.scalar_c - float(action.vector_b @ solution))
        )

        assert classical_action(regular_config, disc) == pytest.approx(expected, rel=1e-10)

    def test_free_particle_action(self, free_config: OscillatorConfig):
        """Test S_c = m(x_F − x_I)²/2T for ω = 0 at any N."""
        for steps in (2, 3, 50):
            disc = Discretization.for_config(free_config, steps)
            assert classical_action(free_config, disc) == pytest.approx(0.5, rel=1e-12)


class TestClosedForm:
    """Test the continuum kernel."""

    def test_quarter_period(self, quarter_period: OscillatorConfig):
        """Test K = (2π)^(−1/2)·exp(−iπ/4) at T = π/2, x_I = 0, x_F = 1."""
        kernel = closed_form_kernel(quarter_period)

        assert isinstance(kernel, RegularKernel)
        assert kernel.magnitude == pytest.approx(0.398942, abs=1e-6)
        assert kernel.phase == pytest.approx(-0.785398, abs=1e-6)
        assert kernel.maslov_index == 0

    def test_full_period_is_delta(self):
        """Test ωT = 2π → e^{−iπ}δ(x_F − x_I)."""
        kernel = closed_form_kernel(OscillatorConfig(omega=1.0, time=2.0 * math.pi))

        assert isinstance(kernel, CausticDelta)
        assert kernel.m_index == 2
        assert kernel.maslov_phase == pytest.approx(-math.pi)
        assert kernel.parity == 1
        assert kernel.phase_factor == pytest.approx(-1.0 + 0j, abs=1e-15)

    def test_half_period_is_odd_delta(self):
        """Test ωT = π → e^{−iπ/2}δ(x_F + x_I)."""
        kernel = closed_form_kernel(OscillatorConfig(omega=1.0, time=math.pi))

        assert isinstance(kernel, CausticDelta)
        assert kernel.parity == -1
        assert kernel.maslov_phase == pytest.approx(-math.pi / 2.0)

    def test_two_and_a_half_half_periods(self):
        """Test |K| = sqrt(mω/2πħ) and phase −π/4 − π at ωT = 2.5π, x = 0."""
        kernel = closed_form_kernel(OscillatorConfig(omega=1.0, time=2.5 * math.pi))

        assert isinstance(kernel, RegularKernel)
        assert kernel.magnitude == pytest.approx(math.sqrt(1.0 / (2.0 * math.pi)), rel=1e-12)
        assert kernel.phase == pytest.approx(-math.pi / 4.0 - math.pi, abs=1e-12)
        assert kernel.maslov_phase == pytest.approx(-math.pi)

    @pytest.mark.parametrize("m_index", [1, 2, 3, 4])
    def test_phase_drops_at_each_caustic(self, m_index: int):
        """Test the −π/2 phase jump across ωT = Mπ at the origin."""
        before = closed_form_kernel(OscillatorConfig(omega=1.0, time=m_index * math.pi - 0.1))
        after = closed_form_kernel(OscillatorConfig(omega=1.0, time=m_index * math.pi + 0.1))

        assert isinstance(before, RegularKernel)
        assert isinstance(after, RegularKernel)
        assert before.phase - after.phase == pytest.approx(math.pi / 2.0, abs=1e-14)

    def test_continuum_rejects_caustic(self):
        """Test that the Gaussian form is refused at a caustic."""
        with pytest.raises(CausticProximityError) as exc_info:
            continuum_gaussian_kernel(OscillatorConfig(omega=1.0, time=3.0 * math.pi))
        assert exc_info.value.m_index == 3

    def test_free_kernel_value(self, free_config: OscillatorConfig):
        """Test sqrt(1/2πi)·e^{i/2} for m = ħ = T = 1, x_I = 0, x_F = 1."""
        kernel = closed_form_kernel(free_config)
        expected = np.sqrt(1.0 / (2j * math.pi)) * np.exp(0.5j)

        assert isinstance(kernel, RegularKernel)
        assert kernel.amplitude == pytest.approx(complex(expected), rel=1e-14)

    def test_group_property_smeared(self, unit_packet: GaussianPacket):
        """Test ∫dy K(x_F, y; T/2)·(K(T/2)f)(y) = (K(T)f)(x_F)."""
        full = OscillatorConfig(omega=1.0, time=2.0)
        half = continuum_gaussian_kernel(full.with_time(1.0))
        x_final = 0.4

        result = complex_quad(
            lambda y: complex(half.value_at(y, x_final)) * half.smear_gaussian(unit_packet, y),
            -12.0,
            12.0,
            limit=500,
        )
        expected = continuum_gaussian_kernel(full).smear_gaussian(unit_packet, x_final)

        assert abs(result.value - expected) < 1e-8


class TestDiscreteKernel:
    """Test the finite-N kernel."""

    def test_quarter_period_close_to_continuum(self, quarter_period: OscillatorConfig):
        """Test K_256 at T = π/2 against the continuum value."""
        kernel = discrete_kernel(quarter_period, Discretization.for_config(quarter_period, 256))

        assert kernel.magnitude == pytest.approx(0.398942, rel=5e-3)
        assert kernel.phase == pytest.approx(-0.785398, abs=5e-3)
        assert kernel.maslov_index == 0

    def test_magnitude_independent_of_endpoints(self, regular_config: OscillatorConfig):
        """Test that |K_N| does not depend on x_I, x_F."""
        disc = Discretization.for_config(regular_config, 200)
        rng = np.random.default_rng(KERNEL_SEED)
        magnitudes = [
            discrete_kernel(regular_config.with_endpoints(a, b), disc).magnitude
            for a, b in rng.uniform(-3.0, 3.0, size=(5, 2))
        ]

        assert max(magnitudes) == pytest.approx(min(magnitudes), rel=1e-12)

    def test_endpoint_swap_symmetry(self, regular_config: OscillatorConfig):
        """Test K(x_I, x_F) = K(x_F, x_I) exactly."""
        disc = Discretization.for_config(regular_config, 77)
        forward = discrete_kernel(regular_config, disc)
        swapped = discrete_kernel(
            regular_config.with_endpoints(regular_config.x_final, regular_config.x_initial), disc
        )

        assert forward == swapped

    def test_parity_invariance(self, regular_config: OscillatorConfig):
        """Test K(−x_I, −x_F) = K(x_I, x_F) exactly."""
        disc = Discretization.for_config(regular_config, 77)
        forward = discrete_kernel(regular_config, disc)
        mirrored = discrete_kernel(
            regular_config.with_endpoints(-regular_config.x_initial, -regular_config.x_final),
            disc,
        )

        assert forward == mirrored

    @pytest.mark.parametrize("steps", [2, 3, 10, 1000])
    def test_free_particle_exact_at_every_n(self, free_config: OscillatorConfig, steps: int):
        """Test that ω = 0 reproduces the continuum kernel at any N."""
        disc = Discretization.for_config(free_config, steps)
        discrete = discrete_kernel(free_config, disc)
        continuum = free_gaussian_kernel(free_config).at(0.0, 1.0)

        assert discrete.amplitude == pytest.approx(continuum.amplitude, rel=1e-10)

    def test_maslov_phase_separated(self):
        """Test that maslov_phase is −Lπ/2 and included in the total phase."""
        config = OscillatorConfig(omega=1.0, time=3.5 * math.pi)
        kernel = discrete_kernel(config, Discretization.for_config(config, 512))

        assert kernel.maslov_index == 3
        assert kernel.maslov_phase == pytest.approx(-3.0 * math.pi / 2.0)
        assert kernel.phase == pytest.approx(-math.pi / 4.0 + kernel.maslov_phase)

    def test_caustic_refused(self):
        """Test that the pointwise kernel is refused at a caustic."""
        config = OscillatorConfig(omega=1.0, time=2.0 * math.pi)
        with pytest.raises(CausticProximityError, match="caustic"):
            discrete_kernel(config, Discretization.for_config(config, 256))

    def test_caustic_allowed_on_request(self):
        """Test that the finite-N value exists at a caustic when asked for."""
        config = OscillatorConfig(omega=1.0, time=2.0 * math.pi)
        kernel = discrete_kernel(
            config, Discretization.for_config(config, 256), allow_caustic=True
        )

        assert math.isfinite(kernel.magnitude)
        assert kernel.maslov_index == 1

    @pytest.mark.parametrize("config", _seeded_regular_configs(20))
    def test_converges_to_closed_form(self, config: OscillatorConfig):
        """Test relative error < 1e−2 at N = 4096 and monotone decrease."""
        reference = closed_form_kernel(config)
        assert isinstance(reference, RegularKernel)

        errors = []
        for steps in (256, 512, 1024, 2048, 4096):
            value = discrete_kernel(config, Discretization.for_config(config, steps))
            errors.append(kernel_difference(value, reference))

        assert errors[-1] / reference.magnitude < 1e-2
        assert all(b < a for a, b in zip(errors, errors[1:]))


class TestConvergenceStudy:
    """Test the convergence study helper."""

    def test_order_is_measured(self, quarter_period: OscillatorConfig):
        """Test that a positive order is fitted along a doubling ladder."""
        study = convergence_study(quarter_period, [64, 128, 256, 512])

        assert study.steps == [64, 128, 256, 512]
        assert study.order is not None
        assert study.order > 0.5
        assert len(study.doubling_ratios) == 3
        assert all(r == pytest.approx(0.5, abs=0.1) for r in study.doubling_ratios)

    def test_free_particle_has_no_order(self, free_config: OscillatorConfig):
        """Test that an exact kernel gives errors at rounding level."""
        study = convergence_study(free_config, [4, 8, 16])

        assert max(study.errors) < 1e-12

    def test_caustic_rejected(self):
        """Test that the pointwise study is refused at a caustic."""
        with pytest.raises(InvalidInputError, match="smear"):
            convergence_study(OscillatorConfig(omega=1.0, time=math.pi), [64, 128])

    def test_empty_ladder_rejected(self, quarter_period: OscillatorConfig):
        """Test that the ladder must not be empty."""
        with pytest.raises(InvalidInputError, match="non-empty"):
            convergence_study(quarter_period, [])
