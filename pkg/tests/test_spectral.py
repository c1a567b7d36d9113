"""
Tests for the fluctuation spectrum and the Maslov index classification.
"""

# pyright: basic

import math

import numpy as np
import pytest

from maslov_kernel.errors import (
    InvalidInputError,
    SpectrumTooCoarseError,
)
from maslov_kernel.model.oscillator import Discretization, OscillatorConfig
from maslov_kernel.modules.kernel import determinant_sequence
from maslov_kernel.modules.lattice_action import build_action
from maslov_kernel.modules.spectral import (
    abs_eigenvalue_product,
    caustic_classification,
    classify,
    determinant_closed_form,
    eigenvalues_closed_form,
    eigenvalues_numeric,
    eigenvalues_trigonometric_form,
    eigenvector,
    stabilization_steps,
    sturm_bisection,
    sturm_count,
    zero_crossing,
)


def _config(half_periods: float, **kwargs) -> OscillatorConfig:
    return OscillatorConfig(omega=1.0, time=half_periods * math.pi, **kwargs)


class TestEigenvalues:
    """Test the closed-form eigenvalues."""

    def test_free_particle_positive(self):
        """Test that ω = 0 gives λ_k = 2(1 − cos(kπ/4)) at N = 4."""
        config = OscillatorConfig(omega=0.0, time=1.0)
        values = eigenvalues_closed_form(config, Discretization.for_config(config, 4))

        expected = [2.0 * (1.0 - math.cos(k * math.pi / 4.0)) for k in (1, 2, 3)]
        assert values == pytest.approx(expected, rel=1e-14)
        assert np.all(values > 0)

    def test_caustic_two_steps(self):
        """Test λ_1 = 2 − π²/8 at ωT = π, N = 2."""
        config = _config(1.0)
        values = eigenvalues_closed_form(config, Discretization.for_config(config, 2))

        assert values[0] == pytest.approx(2.0 - math.pi**2 / 8.0, rel=1e-14)

    def test_two_negatives_at_two_and_a_half(self):
        """Test that ωT = 2.5π has exactly two negative eigenvalues at N = 64."""
        config = _config(2.5)
        values = eigenvalues_closed_form(config, Discretization.for_config(config, 64))

        assert np.count_nonzero(values < 0) == 2

    @pytest.mark.parametrize("m_index", [1, 2, 3])
    def test_caustic_eigenvalue_shrinks(self, m_index: int):
        """Test that |λ_M| at ωT = Mπ decreases monotonically along a doubling ladder."""
        config = _config(float(m_index))
        lattices = [Discretization.for_config(config, n) for n in (8, 16, 32, 64, 128, 256, 512, 1024)]
        magnitudes = [abs(eigenvalues_trigonometric_form(config, d)[m_index - 1]) for d in lattices]

        assert all(b < a for a, b in zip(magnitudes, magnitudes[1:]))
        assert magnitudes[-1] < 1e-8

    @pytest.mark.parametrize("steps", [2, 7, 64, 1000])
    def test_strictly_increasing(self, steps: int):
        """Test that the eigenvalues increase with k."""
        config = _config(3.3)
        values = eigenvalues_trigonometric_form(config, Discretization.for_config(config, steps))

        assert np.all(np.diff(values) > 0)

    def test_forms_agree(self, regular_config: OscillatorConfig):
        """Test that both closed forms agree (checked inside the function too)."""
        disc = Discretization.for_config(regular_config, 300)
        direct = eigenvalues_closed_form(regular_config, disc)
        trigonometric = eigenvalues_trigonometric_form(regular_config, disc)

        assert np.max(np.abs(direct - trigonometric)) < 1e-12

    @pytest.mark.parametrize("steps", [2, 16, 257, 2048])
    def test_sturm_solver_matches_closed_form(self, steps: int):
        """Test the independent bisection solver against the closed form."""
        config = OscillatorConfig(mass=1.1, omega=1.7, hbar=0.8, time=7.3)
        disc = Discretization.for_config(config, steps)
        numeric = eigenvalues_numeric(build_action(config, disc))
        closed = eigenvalues_trigonometric_form(config, disc)

        assert np.max(np.abs(numeric - closed)) < 1e-12

    def test_sturm_bisection_small_matrix(self):
        """Test bisection on a matrix with known spectrum {1, 3}."""
        values = sturm_bisection([2.0, 2.0], [1.0])

        assert values == pytest.approx([1.0, 3.0], abs=1e-14)

    def test_sturm_count(self):
        """Test eigenvalue counts below several shifts."""
        counts = sturm_count([2.0, 2.0], [1.0], [0.0, 1.5, 2.5, 4.0])

        assert counts.tolist() == [0, 1, 1, 2]

    def test_sturm_count_shape_mismatch(self):
        """Test that mismatched diagonals are rejected."""
        with pytest.raises(InvalidInputError, match="does not fit"):
            sturm_count([1.0, 2.0], [1.0, 1.0], 0.0)


class TestEigenvectors:
    """Test the closed-form eigenvectors."""

    def test_single_entry(self):
        """Test N = 2, k = 1 → (1.0)."""
        view = eigenvector(Discretization(steps=2, time=1.0), 1)

        assert view.entries == pytest.approx([1.0], abs=1e-15)

    def test_four_steps_middle_mode(self):
        """Test N = 4, k = 2 → (1, 0, −1)/√2."""
        view = eigenvector(Discretization(steps=4, time=1.0), 2)

        assert view.entries == pytest.approx([2**-0.5, 0.0, -(2**-0.5)], abs=1e-15)

    @pytest.mark.parametrize(("steps", "k"), [(3, 1), (10, 4), (64, 63), (500, 250)])
    def test_residual_and_norm(self, steps: int, k: int):
        """Test ‖Av − λv‖ < 1e−10 and unit norm."""
        config = OscillatorConfig(omega=1.3, time=9.0)
        disc = Discretization.for_config(config, steps)
        action = build_action(config, disc)
        v = eigenvector(disc, k).entries
        eigenvalue = eigenvalues_trigonometric_form(config, disc)[k - 1]

        assert np.linalg.norm(action.matvec(v) - eigenvalue * v) < 1e-10
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("steps", [2, 5, 64, 257])
    def test_orthonormal(self, steps: int):
        """Test |⟨v_j, v_k⟩ − δ_jk| < 1e−10 over the whole basis."""
        disc = Discretization(steps=steps, time=1.0)
        basis = np.array([eigenvector(disc, k).entries for k in range(1, steps)])

        gram = basis @ basis.T

        assert np.max(np.abs(gram - np.eye(steps - 1))) < 1e-10

    @pytest.mark.parametrize("k", [0, 4])
    def test_index_out_of_range(self, k: int):
        """Test that k must lie in 1..N−1."""
        with pytest.raises(InvalidInputError, match="outside"):
            eigenvector(Discretization(steps=4, time=1.0), k)


class TestZeroCrossing:
    """Test x_0(N) = (2N/π)·arctan(ωT/2N)."""

    def test_known_values(self):
        """Test the crossing at ωT = π for N = 2 and N = 10."""
        config = _config(1.0)

        assert zero_crossing(config, Discretization.for_config(config, 2)) == pytest.approx(
            4.0 / math.pi * math.atan(math.pi / 4.0), rel=1e-14
        )
        assert zero_crossing(config, Discretization.for_config(config, 10)) == pytest.approx(
            20.0 / math.pi * math.atan(math.pi / 20.0), rel=1e-14
        )

    @pytest.mark.parametrize("steps", [2, 5, 40, 1024])
    def test_monotone_and_bounded(self, steps: int):
        """Test x_0(N) < x_0(2N) < ωT/π."""
        config = _config(2.7)
        small = zero_crossing(config, Discretization.for_config(config, steps))
        large = zero_crossing(config, Discretization.for_config(config, 2 * steps))

        assert small < large < config.half_periods

    def test_free_particle_has_no_crossing(self, free_config: OscillatorConfig):
        """Test that ω = 0 is rejected."""
        with pytest.raises(InvalidInputError, match="no zero crossing"):
            zero_crossing(free_config, Discretization.for_config(free_config, 8))


class TestClassification:
    """Test negative counts and the Maslov index."""

    @pytest.mark.parametrize(("half_periods", "expected"), [(0.5, 0), (1.5, 1), (2.5, 2), (3.5, 3)])
    def test_maslov_ladder(self, half_periods: float, expected: int):
        """Test L = 0..3 for ωT/π ∈ {0.5, 1.5, 2.5, 3.5}, confirmed by bisection at N = 512."""
        config = _config(half_periods)
        disc = Discretization.for_config(config, 512)
        spectrum = classify(config, disc)
        numeric = eigenvalues_numeric(build_action(config, disc))

        assert spectrum.maslov_l == expected
        assert spectrum.negative_count == expected
        assert int(np.count_nonzero(numeric < 0)) == expected
        assert spectrum.count_stable
        assert not spectrum.at_caustic

    @pytest.mark.parametrize("m_index", [1, 2, 3, 4])
    def test_caustic_index(self, m_index: int):
        """Test L = M − 1 at ωT = Mπ."""
        config = _config(float(m_index))
        spectrum = classify(config, Discretization.for_config(config, 256))

        assert spectrum.at_caustic
        assert spectrum.m_index == m_index
        assert spectrum.maslov_l == m_index - 1
        assert spectrum.negative_count == m_index - 1

    def test_count_matches_floor_of_crossing(self):
        """Test negative_count = floor(x_0(N)) away from integer crossings."""
        config = _config(5.6)
        for steps in (3, 8, 20, 100):
            spectrum = classify(config, Discretization.for_config(config, steps), strict=False)
            assert spectrum.negative_count == math.floor(spectrum.zero_crossing)

    def test_coarse_lattice_strict(self):
        """Test that a coarse lattice is reported in strict mode."""
        config = _config(3.9)
        disc = Discretization.for_config(config, 4)

        with pytest.raises(SpectrumTooCoarseError) as exc_info:
            classify(config, disc)
        assert exc_info.value.expected == 3
        assert exc_info.value.negative_count < 3

    def test_coarse_lattice_lenient(self):
        """Test that strict=False flags the count instead of raising."""
        config = _config(3.9)
        spectrum = classify(config, Discretization.for_config(config, 4), strict=False)

        assert not spectrum.count_stable
        assert spectrum.maslov_l == 3

    def test_free_particle(self, free_config: OscillatorConfig):
        """Test that the free particle has no negatives and no caustic."""
        spectrum = classify(free_config, Discretization.for_config(free_config, 16))

        assert spectrum.negative_count == 0
        assert spectrum.maslov_l == 0
        assert spectrum.zero_crossing == 0.0

    def test_caustic_classification_tolerance(self):
        """Test the tolerance on the distance of ωT/π from an integer."""
        config = OscillatorConfig(omega=1.0, time=6.2831853)

        assert caustic_classification(config, 1e-7) == (True, 2)
        assert caustic_classification(config, 1e-9) == (False, 1)

    def test_time_zero_side_never_caustic(self):
        """Test that ωT/π near zero is not a caustic."""
        config = OscillatorConfig(omega=1.0, time=1e-12)

        assert caustic_classification(config, 1e-7) == (False, 0)

    @pytest.mark.parametrize(
        ("half_periods", "expected_l"), [(0.7, 0), (2.1, 2), (3.0, 2), (6.4, 6)]
    )
    def test_stabilization_steps(self, half_periods: float, expected_l: int):
        """Test that the returned N is the first one with count L."""
        config = _config(half_periods)
        n = stabilization_steps(config)

        assert classify(config, Discretization.for_config(config, n), strict=False).negative_count == expected_l
        if n > 2:
            below = classify(config, Discretization.for_config(config, n - 1), strict=False)
            assert below.negative_count < expected_l


class TestDeterminant:
    """Test det A from eigenvalues, from σ(N) and from the minor recursion."""

    @pytest.mark.parametrize("steps", [2, 9, 128, 2048])
    def test_product_identity(self, regular_config: OscillatorConfig, steps: int):
        """Test Π|λ_k| = (N/ωT)|Im σ²| in log form."""
        disc = Discretization.for_config(regular_config, steps)
        product = abs_eigenvalue_product(regular_config, disc)
        closed = determinant_closed_form(regular_config, disc)

        assert abs(math.expm1(product.log_magnitude - closed.log_magnitude)) < 1e-10
        assert product.sign == closed.sign
        assert product.negative_count == closed.negative_count

    @pytest.mark.parametrize("steps", [2, 9, 128, 2048])
    def test_recursion_matches_closed_form(self, regular_config: OscillatorConfig, steps: int):
        """Test D_{N−1} from the recursion against the σ closed form."""
        disc = Discretization.for_config(regular_config, steps)
        recursion = determinant_sequence(regular_config, disc).final
        closed = determinant_closed_form(regular_config, disc)

        assert abs(math.expm1(recursion.log_magnitude - closed.log_magnitude)) < 1e-10
        assert recursion.sign == closed.sign

    def test_free_particle_determinant(self, free_config: OscillatorConfig):
        """Test det A = N for ω = 0."""
        disc = Discretization.for_config(free_config, 37)

        assert determinant_closed_form(free_config, disc).value == pytest.approx(37.0, rel=1e-14)
        assert abs_eigenvalue_product(free_config, disc).value == pytest.approx(37.0, rel=1e-12)

    def test_large_lattice_stays_finite(self):
        """Test that log form survives N where β^N overflows a double."""
        config = OscillatorConfig(omega=1000.0, time=1000.0)
        disc = Discretization.for_config(config, 2**20)
        closed = determinant_closed_form(config, disc)

        assert math.isfinite(closed.log_magnitude)

