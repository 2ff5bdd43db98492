import math

import numpy as np
import pytest
from scipy.integrate import quad

from chebext.chebyshev import NodeGrid, dct_coefficients
from chebext.examples import (
    BUMP_INTEGRAL,
    SUITE_NAMES,
    InstabilitySpec,
    bump_derivative,
    bump_g,
    decay_norm,
    fit_rate,
    fourier_re_vnm,
    hnm_values,
    make_hnm,
    make_vnm,
    standard_suite,
    suite_member,
    vnm_l2_closed_form,
)
from chebext.fourier_grid import GridSpec, l2_norm, sobolev_seminorm

# int_1^2 g and int_1^2 t g^2 (fine midpoint sums, h = 5e-5, spectrally accurate for g)
G_INTEGRAL = 0.00702985840659482
T_G_SQ_INTEGRAL = 0.000145479962300075


class TestBump:
    def test_midpoint(self):
        assert bump_g(1.5) == pytest.approx(0.01831564, abs=1e-8)
        assert bump_g(1.5) == pytest.approx(math.exp(-4), rel=1e-15)

    def test_outside(self):
        assert bump_g(1.0) == 0 and bump_g(2.5) == 0 and bump_g(2.0) == 0

    def test_symmetry(self):
        s = np.linspace(0, 0.5, 51)
        assert np.array_equal(bump_g(1.5 + s), bump_g(1.5 - s))

    def test_integral(self):
        assert BUMP_INTEGRAL == pytest.approx(G_INTEGRAL, rel=1e-12)

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_derivative_against_finite_differences(self, m):
        t = np.linspace(1.05, 1.95, 37)
        h = 1e-3
        stencil = {1: [-0.5, 0, 0.5], 2: [1, -2, 1], 3: [-0.5, 1, 0, -1, 0.5]}[m]
        offsets = np.arange(len(stencil)) - len(stencil) // 2
        fd = sum(c * bump_g(t + o * h) for c, o in zip(stencil, offsets)) / h**m
        exact = bump_derivative(t, m)
        assert np.abs(fd - exact).max() <= 1e-3 * np.abs(exact).max()


class TestSuite:
    def test_names(self):
        assert [f.name for f in standard_suite(1)] == list(SUITE_NAMES)
        with pytest.raises(ValueError):
            standard_suite(3)

    def test_bump_sigma(self):
        assert suite_member("bump", 1).sigma == 2.0
        assert suite_member("bump", 2).sigma == 4.0

    def test_indicator_amplitude(self):
        assert suite_member("indicator", 1).N == pytest.approx(1 / math.pi, rel=1e-15)

    def test_bumps_normalised(self):
        for name in ("bump", "centered_bump", "modulated_bump"):
            for d in (1, 2):
                member = suite_member(name, d)
                g = GridSpec.cube(d, member.sigma + 0.1, 801 if d == 1 else 301)
                l1 = float(np.sum(g.weights() * np.abs(member.spatial(g).values)))
                assert l1 / (2 * np.pi) ** d == pytest.approx(member.N, rel=1e-6)
                assert member.N == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("name", SUITE_NAMES)
    @pytest.mark.parametrize("d", [1, 2])
    def test_support_certified(self, name, d):
        member = suite_member(name, d)
        v = member.spatial(GridSpec.cube(d, member.sigma + 1.0, 201 if d == 1 else 121))
        assert v.support_violation() == 0.0

    def test_gamma_matches_seminorm(self):
        member = suite_member("bump", 1)
        g = GridSpec.cube(1, 3.0, 4097)
        assert member.gamma(1) == pytest.approx(sobolev_seminorm(member.spatial(g), 1), rel=1e-6)

    def test_gamma_matches_seminorm_2d(self):
        member = suite_member("centered_bump", 2)
        g = GridSpec.cube(2, 0.5, 513)
        assert member.gamma(2) == pytest.approx(sobolev_seminorm(member.spatial(g), 2), rel=1e-6)

    def test_indicator_has_no_smoothness_prior(self):
        member = suite_member("indicator", 1)
        with pytest.raises(ValueError):
            member.gamma(1)

    @pytest.mark.parametrize("name", ["bump", "centered_bump", "modulated_bump"])
    def test_fourier_against_quad(self, name):
        factor = suite_member(name, 1).factors[0]
        a, b = factor.support

        def integrand(x, xi, part):
            z = np.exp(1j * xi * x) * factor.spatial(np.array([x]))[0]
            return z.real if part == "re" else z.imag

        for xi in (0.0, 1.7, -6.3):
            re, im = (quad(integrand, a, b, args=(xi, p), epsabs=1e-13, limit=200)[0] for p in ("re", "im"))
            assert factor.fourier(np.array([xi]))[0] == pytest.approx((re + 1j * im) / (2 * np.pi), abs=1e-12)

    @pytest.mark.parametrize("name", SUITE_NAMES)
    def test_converged_coefficients_match_dct(self, name):
        member = suite_member(name, 1)
        nodes = NodeGrid(1, 128, 1.0)
        exact = member.cheb_coefficients(1.0, 127)
        dct = dct_coefficients(member.fourier_nodes(nodes))
        assert np.abs(exact - dct).max() <= 1e-14


class TestPlanarExhibit:
    def test_point_value(self):
        # phi = 0, t = 1.5 lands on the grid at index (7, 4)
        v = make_vnm(InstabilitySpec(n=7, m=2), GridSpec((2.0, 2.0), (9, 9)))
        assert v.values[7, 4] == pytest.approx(7.0**-2 * math.exp(-4), rel=1e-14)
        assert v.values[4, 4] == 0

    def test_zero_off_annulus(self):
        g = GridSpec.cube(2, 2.5, 101)
        v = make_vnm(InstabilitySpec(n=5, m=1), g)
        x1, x2 = g.mesh()
        t = np.hypot(x1, x2)
        assert np.all(v.values[(t <= 1) | (t >= 2)] == 0)

    def test_l2_scaling(self):
        g = GridSpec.cube(2, 2.05, 1024)
        norms = [l2_norm(make_vnm(InstabilitySpec(n=n, m=1), g)) * n for n in (8, 16, 32)]
        assert max(norms) / min(norms) - 1 <= 1e-6

    def test_l2_closed_form(self):
        closed = vnm_l2_closed_form(InstabilitySpec(n=10, m=1))
        assert closed == pytest.approx(0.1 * math.sqrt(math.pi * T_G_SQ_INTEGRAL), rel=1e-9)
        g = GridSpec.cube(2, 2.05, 1024)
        assert l2_norm(make_vnm(InstabilitySpec(n=10, m=1), g)) == pytest.approx(closed, rel=1e-9)

    def test_coverage_checked(self):
        with pytest.raises(ValueError):
            make_vnm(InstabilitySpec(n=3, m=0, beta=0.5), GridSpec.cube(2, 2.0, 32))

    @pytest.mark.parametrize("m", [1, 2])
    def test_cm_norm_bounded(self, m):
        g = GridSpec.cube(2, 2.05, 1537)
        h = g.spacing[0]

        def quotient(n):
            v = make_vnm(InstabilitySpec(n=n, m=m), g).values.real
            return max(np.abs(np.diff(v, m, axis=a)).max() / h**m for a in (0, 1))

        assert quotient(64) <= 1.05 * quotient(16)


class TestLineExhibit:
    def test_positivity_floor(self):
        n, m = 40, 1
        x = np.linspace(-1 / (2 * n), 1 / (2 * n), 11)
        floor = 0.5 * n**-m * 2 * math.cos(1) * G_INTEGRAL
        assert np.all(hnm_values(x, n, m) >= floor)
        refined = hnm_values(x, n, m, epsabs=1e-14)
        assert np.abs(refined - hnm_values(x, n, m)).max() <= 1e-12

    def test_even(self):
        x = np.linspace(0.01, 1.9, 40)
        assert np.abs(hnm_values(x, 12, 1) - hnm_values(-x, 12, 1)).max() <= 1e-12

    def test_vanishes_outside(self):
        assert np.all(hnm_values(np.array([-2.5, 2.0, 3.0]), 5, 0) == 0)

    def test_l2_rate(self):
        g = GridSpec.cube(1, 2.0, 8001)
        ns = [10, 20, 30, 40, 50, 60]
        norms = [l2_norm(make_hnm(InstabilitySpec(n=n, m=1, d=1), g)) for n in ns]
        slope, _ = fit_rate(ns, norms)
        assert slope >= -1.5 - 0.1
        assert abs(slope + 1.5) <= 0.1


class TestDecayNorm:
    def test_bessel_matches_polar_quadrature(self):
        xi = np.linspace(-1, 1, 5)
        e1, e2 = np.meshgrid(xi, xi, indexing="ij")
        a = fourier_re_vnm(4, 1, e1, e2, method="bessel")
        b = fourier_re_vnm(4, 1, e1, e2, method="quadrature")
        assert np.abs(a - b).max() <= 1e-12 * np.abs(a).max()

    def test_exponential_rate(self):
        ns = [10, 20, 30, 40]
        vals = [decay_norm(InstabilitySpec(n=n, m=1), 1.0) for n in ns]
        slope, _ = fit_rate(ns, vals, log_x=False)
        assert slope <= -0.9

    def test_m_shifts_rate_by_log_regression(self):
        # n^{-m} adds -m ln n to ln(decay_norm); its least-squares slope against n is m * s_ln
        ns = np.array([10, 20, 30, 40])
        s_ln, _ = fit_rate(ns, np.exp(np.log(ns)), log_x=False)
        rates = {m: fit_rate(ns, [decay_norm(InstabilitySpec(n=n, m=m), 1.0) for n in ns], log_x=False)[0]
                 for m in (0, 3)}
        assert rates[3] - rates[0] == pytest.approx(-3 * s_ln, abs=1e-10)

    def test_instability_gap(self):
        g = GridSpec.cube(2, 2.05, 512)
        for n in (20, 30, 40):
            spec = InstabilitySpec(n=n, m=1)
            assert decay_norm(spec, 1.0) < l2_norm(make_vnm(spec, g))

    def test_order_limit(self):
        with pytest.raises(ValueError):
            decay_norm(InstabilitySpec(n=81, m=0), 1.0)

    def test_line_exhibit_transform(self):
        # F h = 2 pi F[Re v_{2n}](0, .), so the d = 1 decay is the planar one at 2n
        a = decay_norm(InstabilitySpec(n=6, m=1, d=1), 1.0)
        xi = np.linspace(-1, 1, 129)
        b = 2 * np.pi * np.abs(fourier_re_vnm(12, 1, 0 * xi, xi)).max()
        assert a == pytest.approx(b, rel=1e-14)


class TestFitRate:
    def test_exact_power(self):
        x = np.array([1.0, 2.0, 4.0, 8.0])
        slope, intercept = fit_rate(x, 3 * x**-1.5)
        assert slope == pytest.approx(-1.5) and intercept == pytest.approx(math.log(3))
