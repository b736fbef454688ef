import cmath
import math

import numpy as np
import pytest

from qtorus.bargmann import (
    MOMENTUM,
    POSITION,
    BasisWavefunction,
    ThetaSeriesParams,
    basis_gram_matrix,
    basis_value,
    build_comb,
    cell_nodes,
    comb_inner_product,
    diffraction_profile,
    expected_change_of_basis,
    generator_translations,
    jacobi_theta,
    kernel_fwhm,
    kernel_g,
    measure_wrap_identity,
    monomial_norms,
    projective_phase,
    quadrature_inner_product,
    recover_change_of_basis,
    reproducing_kernel_defect,
    sector_basis_samples,
    theta_truncation,
    translation_apply,
    verify_dft_lemma,
)
from qtorus.errors import ArgumentError, ParameterMismatchError, ThetaConvergenceError, ThetaDomainError
from qtorus.theta_rep import ThetaPoint, center_scalars, identity_matrix, sector_generators
from qtorus.weyl_algebra import PlanckParameter


def brute_theta(omega: complex, tau: complex, terms: int = 60) -> complex:
    return sum(cmath.exp(1j * math.pi * k * k * tau + 2j * math.pi * k * omega) for k in range(-terms, terms + 1))


def plane_grid(radius: float, points: int = 21) -> np.ndarray:
    axis = np.linspace(-radius, radius, points)
    return (axis[:, None] + 1j * axis[None, :]).reshape(-1)


class TestJacobiTheta:

    @pytest.mark.parametrize(["omega", "expected"], ((0.0, 1.0864348112133080), (0.5, 0.9135791381561168)))
    def test_reference_values(self, omega, expected):
        assert jacobi_theta(omega, 1j) == pytest.approx(expected, rel=1e-12)

    def test_matches_direct_summation(self, rng):
        for _ in range(20):
            omega = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            tau = 1j * rng.integers(1, 5)
            assert jacobi_theta(omega, tau) == pytest.approx(brute_theta(omega, tau), abs=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_periodic_in_omega(self, n, rng):
        omega = complex(rng.uniform(-1, 1), rng.uniform(-0.5, 0.5))
        assert jacobi_theta(omega + 1, 1j * n) == pytest.approx(jacobi_theta(omega, 1j * n), abs=1e-12)

    def test_vectorized_over_omega(self):
        omegas = np.array([0.0, 0.5, 0.25j])
        values = jacobi_theta(omegas, 1j)
        assert values.shape == (3,)
        assert values[1] == pytest.approx(jacobi_theta(0.5, 1j))

    def test_tail_bound_is_honoured(self, rng):
        params = ThetaSeriesParams(tolerance=1e-12)
        for _ in range(20):
            omega = complex(rng.uniform(-1, 1), rng.uniform(-0.5, 0.5))
            tau = 1j * rng.integers(1, 4)
            K, bound = theta_truncation(omega, tau, params)
            assert bound < 1e-12
            assert abs(jacobi_theta(omega, tau, params) - brute_theta(omega, tau, K + 30)) <= 1e-12 + 1e-13

    @pytest.mark.parametrize("tau", [0.0, -1j, 1.0])
    def test_lower_half_plane_is_rejected(self, tau):
        with pytest.raises(ThetaDomainError):
            jacobi_theta(0.0, tau)

    def test_budget_exhaustion(self):
        with pytest.raises(ThetaConvergenceError) as error:
            jacobi_theta(0.0, 0.01j, ThetaSeriesParams(tolerance=1e-15, max_terms=3))
        assert error.value.max_terms == 3
        assert error.value.achieved_bound > 1e-15

    @pytest.mark.parametrize(["tolerance", "max_terms"], ((0.0, 10), (1e-10, 0)))
    def test_invalid_parameters(self, tolerance, max_terms):
        with pytest.raises(ArgumentError):
            ThetaSeriesParams(tolerance=tolerance, max_terms=max_terms)


class TestSectorBasis:

    def test_value_at_origin(self):
        b = BasisWavefunction(0, ThetaPoint(), PlanckParameter(1))
        assert basis_value(b, 0.0) == pytest.approx(2 ** 0.25 * jacobi_theta(0.0, 1j), rel=1e-12)
        assert b.normalization == pytest.approx(2 ** 0.25)

    def test_index_out_of_range(self):
        with pytest.raises(ArgumentError):
            BasisWavefunction(2, ThetaPoint(), PlanckParameter(2))

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_gram_matrix_is_identity(self, n, random_thetas):
        planck = PlanckParameter(n)
        for theta in random_thetas(5):
            gram = basis_gram_matrix(planck, theta, 200)
            assert gram.allclose(identity_matrix(n), atol=1e-6)

    def test_quadrature_inner_product(self):
        planck = PlanckParameter(2)
        theta = ThetaPoint(0.3, 0.7)
        b0, b1 = BasisWavefunction(0, theta, planck), BasisWavefunction(1, theta, planck)
        assert quadrature_inner_product(b0, b0, 120) == pytest.approx(1.0, abs=1e-6)
        assert quadrature_inner_product(b0, b1, 120) == pytest.approx(0.0, abs=1e-6)
        with pytest.raises(ArgumentError):
            quadrature_inner_product(b0, b1, 1)

    def test_inner_product_needs_one_sector(self):
        planck = PlanckParameter(2)
        with pytest.raises(ParameterMismatchError):
            quadrature_inner_product(
                BasisWavefunction(0, ThetaPoint(0.1, 0.0), planck),
                BasisWavefunction(0, ThetaPoint(0.2, 0.0), planck),
                50,
            )

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_wrap_identity(self, n, random_thetas):
        planck = PlanckParameter(n)
        _, _, z, _ = cell_nodes(8, planck)
        for theta in random_thetas(3):
            for m in range(n):
                assert measure_wrap_identity(m, theta, planck, z) < 1e-8

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_center_translations_are_scalars(self, n, random_thetas):
        planck = PlanckParameter(n)
        z = plane_grid(1.0)
        damping = np.exp(-np.abs(z) ** 2 / (2 * planck.hbar))
        shifts = generator_translations(planck)
        for theta in random_thetas(3):
            scalars = dict(zip("XY", center_scalars(theta)))
            for m in range(n):
                def phi(w, m=m):
                    return sector_basis_samples(planck, theta, w)[m]
                for name in "XY":
                    moved = translation_apply(shifts[name], phi, planck)(z)
                    np.testing.assert_allclose(moved * damping, scalars[name] * phi(z) * damping, atol=1e-8)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_generator_translations_match_sector_matrices(self, n, random_thetas):
        planck = PlanckParameter(n)
        z = plane_grid(1.0)
        damping = np.exp(-np.abs(z) ** 2 / (2 * planck.hbar))
        shifts = generator_translations(planck)
        for theta in random_thetas(3):
            u, v = (g.entries for g in sector_generators(planck, theta))
            samples = sector_basis_samples(planck, theta, z)
            for m in range(n):
                def phi(w, m=m):
                    return sector_basis_samples(planck, theta, w)[m]
                moved_u = translation_apply(shifts["U"], phi, planck)(z)
                moved_v = translation_apply(shifts["V"], phi, planck)(z)
                np.testing.assert_allclose(moved_u * damping, (u[:, m] @ samples) * damping, atol=1e-8)
                np.testing.assert_allclose(moved_v * damping, (v[:, m] @ samples) * damping, atol=1e-8)


class TestTranslations:

    @staticmethod
    def psi(z):
        return np.exp(-z ** 2 / 2 + 0.3 * z)

    def test_projective_composition(self):
        planck = PlanckParameter(2)
        z = plane_grid(1.0)
        shifts = plane_grid(1.0, points=5)
        for a in shifts[::3]:
            for b in shifts[1::4]:
                lhs = translation_apply(a, translation_apply(b, self.psi, planck), planck)(z)
                rhs = projective_phase(a, b, planck) * translation_apply(a + b, self.psi, planck)(z)
                np.testing.assert_allclose(lhs, rhs, rtol=1e-10)

    @pytest.mark.parametrize("n", [1, 3, 8])
    def test_generator_commutation_phase(self, n):
        planck = PlanckParameter(n)
        shifts = generator_translations(planck)
        z = plane_grid(0.5)
        uv = translation_apply(shifts["U"], translation_apply(shifts["V"], self.psi, planck), planck)(z)
        vu = translation_apply(shifts["V"], translation_apply(shifts["U"], self.psi, planck), planck)(z)
        np.testing.assert_allclose(uv, cmath.exp(4j * math.pi ** 2 * planck.hbar) * vu, rtol=1e-10)
        assert cmath.exp(4j * math.pi ** 2 * planck.hbar) == pytest.approx(cmath.exp(2j * math.pi / n))

    def test_inverse_and_zero_translation(self):
        planck = PlanckParameter(2)
        z = plane_grid(1.0)
        a = 0.3 - 0.2j
        back = translation_apply(-a, translation_apply(a, self.psi, planck), planck)(z)
        np.testing.assert_allclose(back, self.psi(z), rtol=1e-12)
        np.testing.assert_array_equal(translation_apply(0, self.psi, planck)(z), self.psi(z))


class TestDeltaCombs:

    def test_position_comb_layout(self):
        comb = build_comb(POSITION, 0, ThetaPoint(), PlanckParameter(2), 1)
        np.testing.assert_allclose(comb.locations, [-1, 0, 1])
        np.testing.assert_allclose(comb.amplitudes, [1 / math.sqrt(2)] * 3)

    def test_momentum_comb_layout(self):
        comb = build_comb(MOMENTUM, 1, ThetaPoint(0.0, 0.5), PlanckParameter(2), 1)
        np.testing.assert_allclose(comb.locations, [-0.25, 0.75, 1.75])
        np.testing.assert_allclose(np.abs(comb.amplitudes), 1 / math.sqrt(2))

    @pytest.mark.parametrize("kind", [POSITION, MOMENTUM])
    def test_amplitude_modulus(self, kind, random_thetas):
        planck = PlanckParameter(3)
        for theta in random_thetas(3):
            comb = build_comb(kind, 2, theta, planck, 5)
            np.testing.assert_allclose(np.abs(comb.amplitudes), 1 / math.sqrt(3), rtol=1e-14)

    @pytest.mark.parametrize(["kind", "m", "truncation"], (("diagonal", 0, 1), (POSITION, 3, 1), (POSITION, 0, -1)))
    def test_invalid_combs(self, kind, m, truncation):
        with pytest.raises(ArgumentError):
            build_comb(kind, m, ThetaPoint(), PlanckParameter(3), truncation)

    def test_dft_lemma_at_n1(self):
        assert verify_dft_lemma(ThetaPoint(), PlanckParameter(1), 20) < 1e-8

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_dft_lemma(self, n, random_thetas):
        for theta in random_thetas(3):
            assert verify_dft_lemma(theta, PlanckParameter(n), 30) < 1e-8

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_change_of_basis_is_recovered(self, n, random_thetas):
        planck = PlanckParameter(n)
        for theta in random_thetas(5):
            recovered = recover_change_of_basis(theta, planck, 30)
            assert recovered.allclose(expected_change_of_basis(theta, planck), atol=1e-5)

    def test_truncation_must_be_positive(self):
        with pytest.raises(ArgumentError):
            verify_dft_lemma(ThetaPoint(), PlanckParameter(2), 0)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_comb_orthonormality(self, n, random_thetas):
        planck = PlanckParameter(n)
        for theta in random_thetas(3):
            combs = [build_comb(POSITION, m, theta, planck, 50) for m in range(n)]
            gram = np.array([[comb_inner_product(c1, c2) for c2 in combs] for c1 in combs])
            np.testing.assert_allclose(gram, np.eye(n), atol=1e-4)

    def test_comb_pairing_is_hermitian(self):
        planck = PlanckParameter(3)
        theta = ThetaPoint(0.4, 0.9)
        c0, c1 = (build_comb(POSITION, m, theta, planck, 20) for m in (0, 1))
        assert comb_inner_product(c0, c1) == pytest.approx(comb_inner_product(c1, c0).conjugate(), abs=1e-14)

    def test_comb_pairing_rejections(self):
        planck = PlanckParameter(2)
        position = build_comb(POSITION, 0, ThetaPoint(), planck, 3)
        with pytest.raises(ArgumentError):
            comb_inner_product(position, build_comb(MOMENTUM, 0, ThetaPoint(), planck, 3))
        with pytest.raises(ParameterMismatchError):
            comb_inner_product(position, build_comb(POSITION, 0, ThetaPoint(0.5, 0.0), planck, 3))


class TestDiffractionKernel:

    @pytest.mark.parametrize("n", [1, 4, 16])
    def test_kernel_at_origin(self, n):
        assert kernel_g(0.0, PlanckParameter(n)) == pytest.approx(n)

    def test_kernel_vanishes_at_multiples_of_pi(self):
        values = kernel_g(np.pi * np.arange(1, 6), PlanckParameter(2))
        np.testing.assert_allclose(np.abs(values), 0.0, atol=1e-14)

    @pytest.mark.parametrize(["h", "peak"], ((0.1, 2.5330295910584444), (0.01, 253.30295910584444)))
    def test_profile_peak_in_figure_convention(self, h, peak):
        r, g_abs2 = diffraction_profile(h, figure_convention=True)
        assert r.shape == g_abs2.shape == (501,)
        assert g_abs2.max() == pytest.approx(peak, rel=1e-9)

    def test_profile_peak_in_library_convention(self):
        _, g_abs2 = diffraction_profile(0.1, figure_convention=False)
        assert g_abs2.max() == pytest.approx(1 / 0.1 ** 2, rel=1e-9)

    def test_profile_rejects_bad_h(self):
        with pytest.raises(ArgumentError):
            diffraction_profile(0.0, figure_convention=True)

    def test_width_scales_with_hbar(self):
        hbar = 1 / (2 * math.pi * 8)
        ratio = kernel_fwhm(hbar / 2) / kernel_fwhm(hbar)
        assert ratio == pytest.approx(0.5, rel=0.1)


class TestGaussianMeasure:

    def test_monomial_norms(self):
        for n, measured, expected in monomial_norms(6, PlanckParameter(3)):
            assert measured == pytest.approx(expected, rel=1e-10), n

    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_reproducing_kernel(self, n, rng):
        coeffs = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        assert reproducing_kernel_defect(coeffs, plane_grid(0.3, points=5), PlanckParameter(n)) < 1e-9

    def test_cell_nodes(self):
        planck = PlanckParameter(2)
        x, p, z, weights = cell_nodes(4, planck)
        assert x.shape == p.shape == z.shape == weights.shape == (16,)
        np.testing.assert_allclose(z, (x + 1j * p) / math.sqrt(2))
        with pytest.raises(ArgumentError):
            cell_nodes(1, planck)
