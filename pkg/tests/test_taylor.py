from __future__ import annotations

from fractions import Fraction
from math import factorial

import mpmath
import pytest
import sympy

from conftest import shared_table, timed_find_n
from pjensen.asymptotics import R_of, ShiftRatio, w_of
from pjensen.certifier.taylor import (
    closed_form_derivative_bound,
    derivative_enclosure,
    exact_taylor_coefficients,
    sup_abs_derivative,
    sup_ratio_error_term,
    taylor_coefficients_in_c,
    taylor_error_bound,
    taylor_of_R,
    taylor_polynomial_value,
)
from pjensen.exact_core import ExactPoly
from pjensen.interval import DomainError, IntervalScalar, c_const, interval

# Maxima of R L / (w^10 (1 - L)) over [0, eps_d], d = 2..5, j = 1..d (no factor 2).
REFERENCE_SECOND_SUMMANDS = {
    2: {1: 1.59552e8, 2: 1.7476e8},
    3: {1: 4.30607e6, 2: 4.60022e6, 3: 4.91402e6},
    4: {1: 51727.4, 2: 54478.9, 3: 57374.2, 4: 60420.8},
    5: {1: 1.54878e-6, 2: 1.58991e-6, 3: 1.63212e-6, 4: 1.67544e-6, 5: 1.71991e-6},
}


def sympy_R_series(order: int):
    t, w = sympy.symbols("t w")
    q = sympy.sqrt(1 + t * w**2)
    expr = sympy.exp(t * w / (1 + q)) * (q - w) / ((1 - w) * (1 + t * w**2) * q)
    ser = sympy.series(expr, w, 0, order + 1).removeO()
    return t, [sympy.Poly(sympy.expand(ser.coeff(w, i)), t) for i in range(order + 1)]


def to_exact(poly: sympy.Poly) -> ExactPoly:
    return ExactPoly([Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())])


class TestCoefficients:
    def test_low_order_closed_forms(self):
        coeffs = exact_taylor_coefficients(3)
        h = Fraction(1, 2)
        assert coeffs[0] == ExactPoly([1])
        assert coeffs[1] == ExactPoly([0, h])
        assert coeffs[2] == ExactPoly([0, -1, Fraction(1, 8)])
        assert coeffs[3] == ExactPoly([0, h, Fraction(-5, 8), Fraction(1, 48)])

    def test_against_sympy(self):
        _, expected = sympy_R_series(6)
        ours = exact_taylor_coefficients(6)
        for i, poly in enumerate(expected):
            assert ours[i] == to_exact(poly)

    def test_in_c(self):
        coeffs = taylor_coefficients_in_c(3, 2)
        assert coeffs[1] == ExactPoly([0, Fraction(3, 2)])
        assert coeffs[2] == ExactPoly([0, -3, Fraction(9, 8)])

    def test_linear_term_against_richardson(self):
        mpmath.mp.dps = 60
        for j in (-1, 1, 2, 5):
            t = 2 * mpmath.pi**2 / 3 * j

            def r(w):
                q = mpmath.sqrt(1 + t * w**2)
                return mpmath.exp(t * w / (1 + q)) * (q - w) / ((1 - w) * (1 + t * w**2) * q)

            h1, h2 = mpmath.mpf("1e-6"), mpmath.mpf("1e-7")
            d1, d2 = (r(h1) - r(-h1)) / (2 * h1), (r(h2) - r(-h2)) / (2 * h2)
            richardson = (100 * d2 - d1) / 99
            ser = taylor_of_R(ShiftRatio(j), 3)
            assert ser.coeffs[1].intersects(c_const() * Fraction(j, 2))
            assert abs(float(ser.coeffs[1]) - float(richardson)) < 1e-12

    def test_polynomial_close_to_R(self):
        for j in (1, 4):
            sr = ShiftRatio(j)
            w = Fraction(1, 200)
            diff = R_of(sr, w) - taylor_polynomial_value(sr, 10, w)
            # the remainder is dominated by the next Taylor term
            next_term = taylor_of_R(sr, 10).coeffs[10] * w**10
            assert abs(float(diff) / float(next_term) - 1) < 0.1

    def test_order_validation(self):
        with pytest.raises(ValueError):
            taylor_of_R(ShiftRatio(1), 0)
        with pytest.raises(ValueError):
            exact_taylor_coefficients(-1)


class TestDerivativeBounds:
    def test_enclosure_contains_coefficient_at_zero(self):
        for j in (1, 3):
            sr = ShiftRatio(j)
            box = IntervalScalar(0, Fraction(1, 100))
            enc = derivative_enclosure(sr, 10, box)
            assert enc.contains(taylor_of_R(sr, 10).coeffs[10].mid())

    def test_examples(self):
        b = sup_abs_derivative(ShiftRatio(2), 10, Fraction("0.021"))
        assert 328255 <= b.upper <= Fraction(11, 10) * 328255
        assert b.converged
        b = sup_abs_derivative(ShiftRatio(5), 10, Fraction("0.0081"))
        assert Fraction("5.37043e7") <= b.upper <= Fraction("1.1") * Fraction("5.37043e7")

    def test_witness_below_bound(self):
        b = sup_abs_derivative(ShiftRatio(1), 10, Fraction("0.0295"))
        assert b.witness.upper <= b.value.upper
        assert b.value.upper <= b.witness.lower * Fraction(1001, 1000) * Fraction(1001, 1000)

    def test_closed_form_dominates_branch_and_bound(self):
        eps = Fraction("0.0081")
        for j in (1, 2, 3):
            sr = ShiftRatio(j)
            # the closed form bounds |R^(10)|; both strategies report |R^(10)| / 10!
            closed = closed_form_derivative_bound(sr, 10, eps) / factorial(10)
            assert closed.upper >= sup_abs_derivative(sr, 10, eps).upper
            assert sup_abs_derivative(sr, 10, eps, "closed_form").upper == closed.upper

    def test_closed_form_domain(self):
        with pytest.raises(ValueError):
            closed_form_derivative_bound(ShiftRatio(-1), 6, Fraction("0.013"))
        with pytest.raises(DomainError):
            closed_form_derivative_bound(ShiftRatio(5), 6, Fraction("0.1"))

    def test_epsilon_validation(self):
        with pytest.raises(ValueError):
            sup_abs_derivative(ShiftRatio(1), 10, Fraction(1, 2))
        with pytest.raises(ValueError):
            sup_abs_derivative(ShiftRatio(1), 10, 0)


class TestErrorBound:
    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_second_summands(self, d):
        # our summand carries the factor 2 of the ratio error bound
        res, _ = timed_find_n(d)
        for j, value in REFERENCE_SECOND_SUMMANDS[d].items():
            ours = float(res.certificate.taylor_error_bounds[j - 1].second.upper) / 2
            assert value * (1 - 1e-4) <= ours <= 1.1 * value

    def test_examples(self):
        b = taylor_error_bound(ShiftRatio(1), 10, Fraction("0.0081"))
        reference = 5893.44 + 1.54878e-6
        assert reference <= float(b.bound) <= 1.1 * reference
        assert float(b.total.upper) == float(b.bound)

    def test_vanishing_second_summand(self):
        # the supremum sits at w = eps, where 2 R L / (w^10 (1 - L)) is about 1.46e-187
        mpmath.mp.dps = 60
        w = mpmath.mpf(1) / 1000
        t = 2 * mpmath.pi**2 / 3
        q = mpmath.sqrt(1 + t * w**2)
        r = mpmath.exp(t * w / (1 + q)) * (q - w) / ((1 - w) * q**3)
        big_l = (1 + 21 * w) / (1 - w) * mpmath.exp(-1 / (2 * w)) + mpmath.exp(-1 / w) / (w**2 - w**3)
        expected = 2 * r * big_l / (w**10 * (1 - big_l))
        bound = sup_ratio_error_term(ShiftRatio(1), 10, Fraction(1, 1000))
        assert float(expected) <= float(bound.upper) <= 1.001 * float(expected)
        assert bound.upper < Fraction(1, 10**186)

    def test_negative_shift(self):
        b = taylor_error_bound(ShiftRatio(-1), 6, Fraction(13, 1000))
        assert b.first.value.is_positive() and b.second.value.is_positive()

    def test_full_containment(self):
        # exact p(n+j)/p(n) lies in A_s(j, w) +- bound * w^s whenever w(n) <= eps
        table = shared_table()
        eps = Fraction("0.0295")
        for j in range(1, 6):
            sr = ShiftRatio(j)
            bound = taylor_error_bound(sr, 10, eps).bound
            poly = taylor_of_R(sr, 9)
            for n in range(400, 2001):
                w = w_of(n)
                assert w.upper <= eps
                approx = poly.evaluate(w)
                slack = bound * w.upper**10
                exact = Fraction(table[n + j], table[n])
                assert approx.lower - slack <= exact <= approx.upper + slack

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_containment_with_certificate_bounds(self, d):
        table = shared_table()
        res, _ = timed_find_n(d)
        cert = res.certificate
        lo = max(400, cert.threshold_n0 + 1)
        for b in cert.taylor_error_bounds:
            sr = ShiftRatio(b.j)
            poly = taylor_of_R(sr, cert.config.s - 1)
            for n in range(lo, max(2000, cert.threshold_n0 + 300)):
                w = w_of(n)
                approx = poly.evaluate(w)
                slack = b.bound * w.upper**cert.config.s
                exact = Fraction(table[n + b.j], table[n])
                assert approx.lower - slack <= exact <= approx.upper + slack


def test_exact_interval_helper():
    assert interval(Fraction(1, 3)).contains(Fraction(1, 3))
