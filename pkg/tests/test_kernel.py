"""Clock, conformable derivative and conformable integral."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conformal_flow import (ClockPoint, Order, ScalarFunction, clock,
                            clock_inverse, conformable_derivative,
                            conformable_integral, default_epsilons,
                            derivative_equivalence_check, factor_through_clock,
                            graded_weighted_quadrature)
from conformal_flow import functions
from conformal_flow.errors import DomainError, NumericalFailureError
from conformal_flow.kernel import fit_convergence_order

from conftest import EPS, ulp_gap

ALPHAS = (0.1, 0.25, 0.5, 0.75, 1.0)


class TestOrder:
    @pytest.mark.parametrize("alpha", [0.0, -0.3, 1.0001, 2.0])
    def test_rejects_out_of_range(self, alpha):
        with pytest.raises(DomainError):
            Order(alpha)

    @pytest.mark.parametrize("alpha", [1e-6, 0.1, 0.5, 1.0])
    def test_accepts_valid(self, alpha):
        assert Order(alpha).alpha == alpha


class TestClock:
    def test_identity_at_alpha_one(self):
        assert float(clock(Order(1.0), 7.3)) == 7.3
        assert float(clock_inverse(Order(1.0), 2.5)) == 2.5

    def test_direct_values(self):
        # 4**0.5 / 0.5 = 4 and (0.5 * 4)**2 = 4
        assert float(clock(Order(0.5), 4.0)) == 4.0
        assert float(clock_inverse(Order(0.5), 4.0)) == 4.0

    def test_zero_maps_to_zero(self):
        assert float(clock(Order(0.5), 0.0)) == 0.0
        assert float(clock_inverse(Order(0.25), 0.0)) == 0.0

    def test_round_trip_forced_by_bijectivity(self):
        order = Order(0.25)
        assert ulp_gap(clock_inverse(order, clock(order, 3.0)), 3.0) <= 4

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_round_trip_log_grid(self, alpha):
        order = Order(alpha)
        t = np.logspace(-6, 6, 2000)
        assert ulp_gap(clock_inverse(order, clock(order, t)), t) <= 4

    def test_round_trip_wide_range(self):
        order = Order(0.5)
        t = np.logspace(-8, 8, 500)
        assert ulp_gap(clock_inverse(order, clock(order, t)), t) <= 4

    @given(st.floats(min_value=-6, max_value=6),
           st.sampled_from(ALPHAS))
    @settings(max_examples=200, deadline=None)
    def test_round_trip_property(self, log_t, alpha):
        t = 10.0 ** log_t
        order = Order(alpha)
        assert ulp_gap(clock_inverse(order, clock(order, t)), t) <= 4

    def test_monotone_on_sorted_samples(self):
        rng = np.random.default_rng(11)
        t = np.sort(10.0 ** rng.uniform(-6, 6, 400))
        for alpha in ALPHAS:
            s = np.asarray(clock(Order(alpha), t), dtype=float)
            assert np.all(np.diff(s) > 0)

    def test_rejects_negative(self):
        with pytest.raises(DomainError):
            clock(Order(0.5), -1.0)
        with pytest.raises(DomainError):
            clock_inverse(Order(0.5), -0.1)

    def test_clock_point_consistency(self):
        for alpha in ALPHAS:
            order = Order(alpha)
            pt = ClockPoint.from_native(order, 3.7)
            assert ulp_gap(clock_inverse(order, pt.s), pt.t) <= 4
            pt2 = ClockPoint.from_reparam(order, 1.9)
            assert ulp_gap(clock(order, pt2.t), pt2.s) <= 4

    def test_clock_point_rejects_negative(self):
        with pytest.raises(DomainError):
            ClockPoint(t=-1.0, s=0.5)


class TestFactorThroughClock:
    def test_linear_function(self):
        # f(t) = t, alpha = 1/2: g(s) = (s/2)**2 = s**2/4
        g = factor_through_clock(Order(0.5), functions.LINEAR)
        for s in (0.3, 1.0, 4.0):
            assert math.isclose(float(g(s)), s * s / 4.0, rel_tol=4 * EPS)
        assert float(g(4.0)) == pytest.approx(4.0, rel=1e-15)  # g(clock(4)) = f(4)

    def test_constant_is_clock_invariant(self):
        g = factor_through_clock(Order(0.3), functions.CONSTANT_ONE)
        assert all(float(g(s)) == 1.0 for s in (0.1, 1.0, 10.0))

    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.9])
    def test_power_alpha_becomes_linear(self, alpha):
        # f(t) = t**alpha: g(s) = ((alpha s)**(1/alpha))**alpha = alpha * s
        g = factor_through_clock(Order(alpha), functions.power(alpha))
        for s in (0.2, 1.0, 7.0):
            assert math.isclose(float(g(s)), alpha * s, rel_tol=8 * EPS)

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_identity_on_library(self, alpha):
        order = Order(alpha)
        for f in functions.LIBRARY:
            g = factor_through_clock(order, f)
            for t in np.linspace(0.1, 5.0, 17):
                ft = complex(f(t))
                gap = abs(complex(g(clock(order, t))) - ft)
                assert gap <= 4 * EPS * max(abs(ft), 1.0)


class TestConformableDerivative:
    def test_quadratic_limit(self):
        # t**(1-alpha) f'(t) = 2 t**1.5 = 2 at t = 1
        order = Order(0.5)
        d0 = conformable_derivative(order, functions.QUADRATIC, 1.0, 1e-4)
        d1 = conformable_derivative(order, functions.QUADRATIC, 1.0, 5e-5)
        richardson = (4.0 * d1 - d0) / 3.0
        assert abs(richardson - 2.0) <= 1e-10

    def test_constant_is_flat(self):
        assert conformable_derivative(Order(0.7), functions.CONSTANT_ONE,
                                      2.0, 1e-3) == 0.0

    def test_power_alpha_gives_alpha(self):
        # closed form t**(1-a) * a t**(a-1) = a = 0.5, at t = 9
        d = conformable_derivative(Order(0.5), functions.power(0.5), 9.0, 1e-6)
        assert abs(d - 0.5) <= 1e-8

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            conformable_derivative(Order(0.5), functions.SINE, 0.0, 1e-3)
        with pytest.raises(DomainError):
            conformable_derivative(Order(0.5), functions.SINE, -1.0, 1e-3)
        with pytest.raises(DomainError):
            conformable_derivative(Order(0.5), functions.SINE, 1.0, 0.0)

    def test_one_sided_fallback_near_origin(self):
        # t - eps * t**(1-alpha) <= 0 forces the one-sided form
        val = conformable_derivative(Order(0.5), functions.SINE, 1e-4, 0.5)
        assert np.isfinite(abs(val))

    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
    def test_central_order_at_least_19(self, alpha):
        order = Order(alpha)
        for f, t in ((functions.CUBIC, 1.1), (functions.SINE, 0.8),
                     (functions.EXP_DECAY, 1.7), (functions.RATIONAL, 2.3)):
            eps = default_epsilons(order, t)
            ref = t ** (1.0 - alpha) * complex(f.derivative(t))
            devs = [abs(conformable_derivative(order, f, t, e) - ref) for e in eps]
            fitted = fit_convergence_order(eps, devs, 1e-13 * (1 + abs(ref)))
            assert fitted >= 1.9

    def test_one_sided_order_at_least_09(self):
        order = Order(0.5)
        t = 1.3
        eps = default_epsilons(order, t)
        ref = t ** 0.5 * math.cos(t)
        devs = [abs(conformable_derivative(order, functions.SINE, t, e,
                                           scheme="one_sided") - ref)
                for e in eps]
        assert fit_convergence_order(eps, devs, 1e-13) >= 0.9


class TestDerivativeEquivalence:
    def test_sine_converges_to_weighted_cosine(self):
        # both sides equal sqrt(t) cos(t); at t = 1 that is cos(1)
        order = Order(0.5)
        report = derivative_equivalence_check(order, functions.SINE, 1.0,
                                              default_epsilons(order, 1.0))
        assert report.fitted_order >= 1.0
        assert report.deviations[-1] <= 1e-7
        d = conformable_derivative(order, functions.SINE, 1.0, 1e-6)
        assert abs(d - math.cos(1.0)) <= 1e-8

    def test_linear_alpha_one_exact(self):
        order = Order(1.0)
        report = derivative_equivalence_check(order, functions.LINEAR, 2.0,
                                              default_epsilons(order, 2.0))
        assert np.all(report.deviations <= 1e-12)
        assert math.isnan(report.fitted_order)  # exact to machine precision

    def test_power_alpha_converges_to_alpha(self):
        order = Order(0.25)
        report = derivative_equivalence_check(order, functions.power(0.25), 2.0,
                                              default_epsilons(order, 2.0))
        assert report.deviations[-1] <= 1e-9
        d = conformable_derivative(order, functions.power(0.25), 2.0, 1e-7)
        assert abs(d - 0.25) <= 1e-8

    def test_bad_inputs(self):
        order = Order(0.5)
        with pytest.raises(DomainError):
            derivative_equivalence_check(order, functions.SINE, -1.0, [1e-2, 1e-3])
        with pytest.raises(DomainError):
            derivative_equivalence_check(order, functions.SINE, 1.0, [1e-3, 1e-2])


class TestConformableIntegral:
    def test_weight_only(self):
        # int_0^2 tau**(alpha-1) dtau = 2**alpha / alpha = psi(2)
        got = conformable_integral(Order(0.5), functions.CONSTANT_ONE, 0.0, 2.0,
                                   tol=1e-10)
        assert abs(got - 2.8284271247461903) <= 1e-9

    def test_zero_integrand(self):
        zero = ScalarFunction(fn=lambda t: 0.0, name="zero")
        assert conformable_integral(Order(0.3), zero, 0.0, 5.0, tol=1e-10) == 0.0

    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
    def test_weight_cancellation(self, alpha):
        # f = tau**(1-alpha) cancels the weight: integral over (0, 3) is 3
        got = conformable_integral(Order(alpha), functions.power(1.0 - alpha),
                                   0.0, 3.0, tol=1e-10)
        assert abs(got - 3.0) <= 1e-8

    def test_complex_integrand(self):
        # int_0^1 e^{i tau} dtau = sin(1) + i(1 - cos(1))
        f = ScalarFunction(fn=lambda t: np.exp(1j * t), name="osc")
        got = conformable_integral(Order(1.0), f, 0.0, 1.0, tol=1e-12)
        want = complex(math.sin(1.0), 1.0 - math.cos(1.0))
        assert abs(got - want) <= 1e-10

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            conformable_integral(Order(0.5), functions.SINE, 2.0, 1.0, tol=1e-8)
        with pytest.raises(DomainError):
            conformable_integral(Order(0.5), functions.SINE, -0.5, 1.0, tol=1e-8)
        with pytest.raises(DomainError):
            conformable_integral(Order(0.5), functions.SINE, 0.0, 1.0, tol=-1.0)

    def test_non_convergence_carries_estimate(self):
        osc = ScalarFunction(fn=lambda t: np.sin(1e9 * float(t)), name="fast")
        with pytest.raises(NumericalFailureError) as err:
            conformable_integral(Order(0.5), osc, 0.0, 2.0, tol=1e-12)
        assert err.value.estimate is not None and err.value.estimate > 0

    @pytest.mark.parametrize("alpha", [0.25, 0.5, 1.0])
    @pytest.mark.parametrize("a,x", [(0.0, 1.0), (0.0, 10.0), (0.5, 1.0), (0.5, 10.0)])
    def test_matches_graded_direct_quadrature(self, alpha, a, x):
        order = Order(alpha)
        tol = 1e-9
        for f in (functions.CONSTANT_ONE, functions.SINE, functions.EXP_DECAY,
                  functions.RATIONAL):
            lhs = conformable_integral(order, f, a, x, tol=tol)
            rhs = graded_weighted_quadrature(order, f, a, x)
            assert abs(lhs - rhs) <= 10 * tol * max(1.0, abs(rhs))


class TestAlphaOneDegeneracy:
    def test_clock_is_bit_identity(self):
        order = Order(1.0)
        t = np.logspace(-3, 3, 50)
        assert np.all(np.asarray(clock(order, t), dtype=float) == t)
        assert np.all(np.asarray(clock_inverse(order, t), dtype=float) == t)

    def test_derivative_matches_classical_quotient(self):
        order = Order(1.0)
        f, t, e = functions.SINE, 1.3, 1e-4
        conf = conformable_derivative(order, f, t, e)
        classical = (f(t + e) - f(t - e)) / (2.0 * e)
        assert conf == classical  # t**(1-alpha) is exactly 1

    def test_integral_matches_classical(self):
        from scipy.integrate import quad
        order = Order(1.0)
        got = conformable_integral(order, functions.SINE, 0.2, 2.0, tol=1e-12)
        want = quad(math.sin, 0.2, 2.0, epsabs=1e-13, epsrel=1e-13)[0]
        assert abs(got - want) <= 4 * EPS * abs(want) + 1e-15


def test_library_derivatives_match_finite_differences():
    # the closed-form derivatives shipped with the library are the true ones
    h = 1e-6
    for f in functions.LIBRARY:
        for t in (0.3, 1.0, 2.7):
            fd = (complex(f(t + h)) - complex(f(t - h))) / (2.0 * h)
            assert abs(fd - complex(f.derivative(t))) <= 1e-7 * (1 + abs(fd))
