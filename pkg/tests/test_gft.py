import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as sci_integrate

from gftlab.gft import (
    Domain, GaussianState, RegimeWarning, TruncationError, cylinder_coeff_approx,
    dual_width, gaussian_fit, gft_forward, gft_inverse, hydrogen_coeff_closed_form,
    parseval_check, plane_wave_amplitude, plane_wave_dual, plane_wave_dual_amplitude,
    sphere_coeff_approx,
)
from gftlab.numerics import DomainError, gauss_legendre
from gftlab.slbasis import BasisFamily, RadialBasis, hydrogen_radial

HYDROGEN = RadialBasis(BasisFamily.hydrogen(), 200)
CYLINDER = RadialBasis(BasisFamily.cylinder(), 200)
SPHERE = RadialBasis(BasisFamily.sphere(), 200)


def hydrogen(sigma):
    return gft_forward(GaussianState(sigma), HYDROGEN, tail_tol=1e-4, n_cap=200)


def bounded(basis, sigma):
    return gft_forward(GaussianState(sigma), basis, tail_tol=1e-4, n_cap=200)


def normalized_amplitude(state, basis, upper):
    # independent normalization of the Gaussian under r^w on [0, upper]
    r, w = gauss_legendre(0.0, upper, 256, 32)
    norm2 = np.sum(w * r ** basis.measure_exponent * state.amplitude(r) ** 2)
    return lambda x: state.amplitude(x) / math.sqrt(norm2)


class TestGaussianState:
    def test_sigma_positive(self):
        with pytest.raises(DomainError):
            GaussianState(0.0)

    def test_full_line_norm(self):
        s = GaussianState(0.7, 0.3, Domain.FULL_LINE)
        value, _ = sci_integrate.quad(s.density, -20, 20)
        assert value == pytest.approx(1.0, abs=1e-12)

    def test_radial_bases_need_half_line(self):
        with pytest.raises(DomainError):
            gft_forward(GaussianState(1.0, domain=Domain.FULL_LINE), SPHERE)


class TestForward:
    def test_basis_element_projects_to_unit_vector(self):
        c = gft_forward(lambda r: hydrogen_radial(1, r), HYDROGEN.with_n_max(20),
                        upper=200.0)
        assert c.values[0] == pytest.approx(1.0, abs=1e-12)
        assert np.max(np.abs(c.values[1:])) < 1e-12
        assert c.normalized

    def test_general_amplitude_needs_upper(self):
        with pytest.raises(DomainError):
            gft_forward(lambda r: np.exp(-r), HYDROGEN)

    def test_normalized_sum(self):
        c = bounded(SPHERE, 0.05)
        assert np.sum(c.values ** 2) == pytest.approx(1.0, abs=1e-12)
        assert np.sum(c.weights()) == pytest.approx(1.0, abs=1e-15)

    def test_decay_at_truncation(self):
        c = bounded(SPHERE, 0.02)
        assert abs(c.values[-1]) < 1e-8 * np.max(np.abs(c.values))

    def test_truncation_error(self):
        # a wide state on the sphere keeps algebraic tails
        with pytest.raises(TruncationError):
            gft_forward(GaussianState(0.3), SPHERE.with_n_max(20), n_cap=20)

    def test_hydrogen_bell_shape(self):
        c = hydrogen(10.0)
        p = c.weights()
        peak = int(np.argmax(p))
        assert 0 < peak < 10
        assert np.all(np.diff(p[peak:20]) < 0)

    def test_literal_weights_reject_negative(self):
        with pytest.raises(DomainError):
            hydrogen(10.0).weights("literal")

    def test_literal_weights_on_cylinder(self):
        c = bounded(CYLINDER, 0.05)
        assert np.all(c.weights("literal") >= 0)


class TestInverse:
    def test_basis_element_round_trip(self):
        c = gft_forward(lambda r: hydrogen_radial(1, r), HYDROGEN.with_n_max(20),
                        upper=200.0)
        r = np.linspace(0, 10, 21)
        assert np.allclose(gft_inverse(c, r), hydrogen_radial(1, r), atol=1e-12)

    def test_hydrogen_sigma10_at_r10(self):
        c = hydrogen(10.0)
        psi = normalized_amplitude(GaussianState(10.0), HYDROGEN, 100.0)
        assert abs(gft_inverse(c, 10.0) - psi(10.0)) < 0.02 * abs(psi(10.0))

    @pytest.mark.parametrize("sigma", [10.0, 20.0, 40.0])
    def test_hydrogen_round_trip(self, sigma):
        c = hydrogen(sigma)
        psi = normalized_amplitude(GaussianState(sigma), HYDROGEN, 10 * sigma)
        r = np.linspace(sigma / 2, 8 * sigma, 400)
        err = np.max(np.abs(gft_inverse(c, r) - psi(r))) / np.max(psi(r))
        assert err < 0.02

    @pytest.mark.parametrize("basis", [CYLINDER, SPHERE], ids=["cylinder", "sphere"])
    @pytest.mark.parametrize("sigma", [0.02, 0.05, 0.1])
    def test_bounded_round_trip(self, basis, sigma):
        c = bounded(basis, sigma)
        psi = normalized_amplitude(GaussianState(sigma), basis, 1.0)
        r = np.linspace(sigma / 2, 1.0, 500)
        err = np.max(np.abs(gft_inverse(c, r) - psi(r))) / np.max(psi(r))
        assert err < 0.02


class TestParseval:
    def test_hydrogen_sigma10(self):
        c = hydrogen(10.0)
        assert parseval_check(GaussianState(10.0), c) < 1e-6

    @pytest.mark.parametrize("sigma", [20.0, 40.0])
    def test_hydrogen_wide(self, sigma):
        assert parseval_check(GaussianState(sigma), hydrogen(sigma)) < 1e-5

    def test_sphere(self):
        assert parseval_check(GaussianState(0.02), bounded(SPHERE, 0.02)) < 1e-8

    @pytest.mark.parametrize("basis", [CYLINDER, SPHERE], ids=["cylinder", "sphere"])
    @pytest.mark.parametrize("sigma", [0.02, 0.05, 0.1, 0.2])
    def test_bounded(self, basis, sigma):
        assert parseval_check(GaussianState(sigma), bounded(basis, sigma)) < 1e-6

    def test_single_mode(self):
        amp = lambda r: hydrogen_radial(1, r)
        c = gft_forward(amp, HYDROGEN.with_n_max(20), upper=200.0)
        assert parseval_check(amp, c) < 1e-12


def _fourier_oracle(xi2, mu1, sigma1, mu2, h):
    def part(fn):
        def integrand(x):
            return fn(plane_wave_amplitude(x, mu1, sigma1, mu2, h)
                      * np.exp(-1j * x * xi2 / h))
        value, _ = sci_integrate.quad(integrand, mu1 - 20 * sigma1, mu1 + 20 * sigma1,
                                      epsabs=1e-13, epsrel=1e-13, limit=400)
        return value

    return (part(np.real) + 1j * part(np.imag)) / math.sqrt(2 * math.pi * h)


class TestPlaneWave:
    def test_width_relation(self):
        dual = plane_wave_dual(GaussianState(1.0, domain=Domain.FULL_LINE), 0.0, 1.0)
        assert dual.sigma == 0.5 and dual.domain is Domain.FULL_LINE
        dual = plane_wave_dual(GaussianState(0.5, domain=Domain.FULL_LINE), 0.0, 1.0)
        assert dual.sigma == 1.0

    @given(st.floats(0.05, 20), st.floats(0.1, 5))
    def test_involution(self, sigma, h):
        s = GaussianState(sigma, domain=Domain.FULL_LINE)
        back = plane_wave_dual(plane_wave_dual(s, 0.3, h), 0.0, h)
        assert back.sigma == pytest.approx(sigma, rel=1e-14)

    def test_rejects_half_line(self):
        with pytest.raises(DomainError):
            plane_wave_dual(GaussianState(1.0))

    def test_quadrature_density(self):
        sigma1, h = 2.0, 1.0
        dual = plane_wave_dual(GaussianState(sigma1, domain=Domain.FULL_LINE), 0.0, h)
        for xi2 in (-0.6, -0.2, 0.0, 0.15, 0.4, 0.9):
            density = abs(_fourier_oracle(xi2, 0.0, sigma1, 0.0, h)) ** 2
            assert density == pytest.approx(float(dual.density(xi2)), abs=1e-6)

    def test_quadrature_amplitude_with_means(self):
        mu1, sigma1, mu2, h = 0.4, 2.0, 0.3, 1.0
        for xi2 in (-0.3, 0.3, 0.8):
            oracle = _fourier_oracle(xi2, mu1, sigma1, mu2, h)
            closed = plane_wave_dual_amplitude(xi2, mu1, sigma1, mu2, h)
            assert abs(oracle - closed) < 1e-6


class TestClosedForms:
    def test_hydrogen_ratio_constant(self):
        q = hydrogen(5.0).raw[:15]
        cf = np.array([hydrogen_coeff_closed_form(n, 5.0) for n in range(1, 16)])
        ratio = cf / q
        assert np.ptp(ratio) / abs(ratio.mean()) < 1e-6

    def test_hydrogen_single_term(self):
        # n = 1: 2 (2 pi)^(-1/4) sigma^{-1/2} * int r^2 exp(-r^2/4 - r) dr at sigma = 1
        value, _ = sci_integrate.quad(lambda r: r * r * math.exp(-r * r / 4 - r), 0, 50)
        expected = 2.0 * (2 * math.pi) ** -0.25 * value
        assert hydrogen_coeff_closed_form(1, 1.0) == pytest.approx(expected, rel=1e-10)

    def test_hydrogen_argmax(self):
        q = hydrogen(10.0).raw[:40]
        cf = np.array([hydrogen_coeff_closed_form(n, 10.0) for n in range(1, 41)])
        assert np.argmax(np.abs(cf)) == np.argmax(np.abs(q))

    def test_printed_variant_disagrees(self):
        q = hydrogen(5.0).raw[:6]
        pr = np.array([hydrogen_coeff_closed_form(n, 5.0, "printed") for n in range(1, 7)])
        ratio = pr / q
        assert np.ptp(ratio) / abs(ratio.mean()) > 1e-2

    def test_large_arguments_finite(self):
        value = hydrogen_coeff_closed_form(80, 60.0)
        assert math.isfinite(value)

    def test_cylinder_shape(self):
        c = bounded(CYLINDER, 0.02)
        approx = cylinder_coeff_approx(np.arange(1, 31), 0.02, 1.0)
        ratio = c.raw[:30] / approx
        assert np.ptp(ratio) / ratio.mean() < 0.01

    def test_cylinder_decays_past_peak(self):
        a = cylinder_coeff_approx(np.arange(1, 200), 0.02, 1.0)
        peak = int(np.argmax(a))
        assert np.all(np.diff(a[peak:]) < 0)

    def test_cylinder_momentum_width_fixed_by_sigma(self):
        # doubling r0 halves the mode spacing in P; the width in P stays put
        wide = bounded(RadialBasis(BasisFamily.cylinder(2.0), 200), 0.02)
        narrow = bounded(CYLINDER, 0.02)
        assert dual_width(wide).sigma_dual == pytest.approx(
            dual_width(narrow).sigma_dual, rel=1e-3)
        n = np.arange(1, 201)
        spread_n = [math.sqrt(np.sum(c.weights() * n ** 2) - np.sum(c.weights() * n) ** 2)
                    for c in (narrow, wide)]
        assert spread_n[1] / spread_n[0] == pytest.approx(2.0, rel=0.02)

    def test_sphere_shape(self):
        c = bounded(SPHERE, 0.02)
        approx = sphere_coeff_approx(np.arange(1, c.n_max + 1), 0.02, 1.0)
        keep = np.abs(c.values) > 1e-6
        ratio = c.raw[keep] / approx[keep]
        assert np.ptp(ratio) / ratio.mean() < 0.01

    @given(st.floats(0.005, 0.1), st.floats(0.5, 3))
    def test_sphere_formula_ratio(self, sigma, r0):
        ratio = sphere_coeff_approx(1, sigma * r0, r0) / sphere_coeff_approx(2, sigma * r0, r0)
        assert ratio == pytest.approx(0.5 * math.exp(3 * (math.pi * sigma) ** 2), rel=1e-12)

    def test_sphere_peak(self):
        sigma = 0.01
        n = np.arange(1, 200)
        peak = n[np.argmax(sphere_coeff_approx(n, sigma, 1.0))]
        assert abs(peak - 1.0 / (math.sqrt(2) * math.pi * sigma)) <= 1.0

    def test_regime_warning(self):
        with pytest.warns(RegimeWarning):
            sphere_coeff_approx(1, 0.5, 1.0)
        with pytest.warns(RegimeWarning):
            cylinder_coeff_approx(1, 0.2, 1.0)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            sphere_coeff_approx(1, 0.05, 1.0)


class TestDualWidth:
    def test_single_mode(self):
        c = gft_forward(lambda r: hydrogen_radial(1, r), HYDROGEN.with_n_max(20),
                        upper=200.0)
        w = dual_width(c)
        assert w.sigma_dual == 0.0 and w.degenerate

    def test_hydrogen_sigma10(self):
        w = dual_width(hydrogen(10.0))
        assert w.sigma_dual == pytest.approx(1 / (1.72 * 10), rel=0.1)

    def test_sphere_fit_agrees_with_moments(self):
        w = dual_width(bounded(SPHERE, 0.02), fit=True)
        assert w.fit_sigma == pytest.approx(w.sigma_dual, rel=0.05)

    @settings(max_examples=20, deadline=None)
    @given(st.floats(-3, 3), st.floats(0.3, 2), st.floats(0.5, 4))
    def test_gaussian_fit_recovers(self, mean, width, amp):
        x = np.linspace(-10, 10, 101)
        y = amp * np.exp(-((x - mean) ** 2) / (2 * width ** 2))
        a, m, s = gaussian_fit(x, y)
        assert (a, m, s) == pytest.approx((amp, mean, width), rel=1e-6, abs=1e-8)

    @pytest.mark.parametrize("sigma", [0.02, 0.05, 0.1])
    def test_sphere_product_near_constant(self, sigma):
        c = bounded(SPHERE, sigma)
        assert sigma * dual_width(c).sigma_dual == pytest.approx(1 / 2.9, rel=0.1)
