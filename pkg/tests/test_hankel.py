from __future__ import annotations

import random
from itertools import combinations
from fractions import Fraction
from math import prod

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import shared_table
from pjensen.exact_core import ExactPoly, JensenSpec, hermite_poly, is_hyperbolic_sturm, jensen_coefficients
from pjensen.hankel import (
    evaluate_sympoly,
    hankel_delta,
    hankel_symbolic,
    hankel_verdict,
    hermite_discriminant_closed_form,
    hermite_hankel_exact,
    is_hyperbolic_hankel,
    power_sums_symbolic,
)

X = sympy.Symbol("x")


def sympy_discriminant(coeffs) -> Fraction:
    disc = sympy.discriminant(sympy.Poly(list(reversed(coeffs)), X))
    return Fraction(int(disc.p), int(disc.q)) if hasattr(disc, "p") else Fraction(int(disc))


def sympy_hyperbolic(coeffs) -> bool:
    poly = sympy.Poly(list(reversed(coeffs)), X)
    sqf = sympy.Poly(sympy.sqf_part(poly.as_expr()), X)
    return sqf.count_roots() == sqf.degree()


class TestPowerSums:
    def test_examples(self):
        sums = power_sums_symbolic(2, 2)
        assert evaluate_sympoly(sums[1], [1, 2, 1]) == -2
        assert evaluate_sympoly(sums[2], [-2, 0, 1]) == 4
        assert evaluate_sympoly(power_sums_symbolic(3, 1)[1], [1, 3, 3, 1]) == -3


class TestSymbolic:
    def test_discriminant_d2(self):
        # a_1^2 - 4 a_0 a_2
        assert hankel_symbolic(2, 2).as_dict() == {(0, 2, 0): 1, (1, 0, 1): -4}

    def test_repeated_roots_vanish(self):
        for d in range(2, 8):
            coeffs = [sympy.binomial(d, i) for i in range(d + 1)]
            assert hankel_symbolic(d, 2).evaluate([int(c) for c in coeffs]) == 0

    def test_cubic(self):
        assert hankel_symbolic(3, 3).evaluate([0, -6, 0, 1]) == 864

    def test_homogeneous_form(self):
        for d in range(2, 7):
            for m in range(2, d + 1):
                assert hankel_symbolic(d, m).is_homogeneous()

    def test_full_minor_is_discriminant(self):
        rng = random.Random(20261018)
        for _ in range(200):
            d = rng.randint(2, 6)
            coeffs = [rng.randint(-9, 9) for _ in range(d)] + [rng.choice([-3, -2, -1, 1, 2, 3])]
            assert Fraction(hankel_symbolic(d, d).evaluate(coeffs)) == sympy_discriminant(coeffs)

    @settings(max_examples=60, deadline=None)
    @given(
        coeffs=st.lists(st.integers(-20, 20), min_size=3, max_size=7).filter(lambda c: c[-1] != 0),
        lam=st.fractions(min_value=-5, max_value=5, max_denominator=7).filter(lambda q: q != 0),
    )
    def test_homogeneity(self, coeffs, lam):
        d = len(coeffs) - 1
        scaled = [lam * c for c in coeffs]
        for m in range(2, d + 1):
            sym = hankel_symbolic(d, m)
            assert sym.evaluate(scaled) == lam ** (2 * m - 2) * sym.evaluate(coeffs)

    @settings(max_examples=60, deadline=None)
    @given(
        roots=st.lists(st.fractions(min_value=-6, max_value=6, max_denominator=5), min_size=2, max_size=6),
        shift=st.fractions(min_value=-4, max_value=4, max_denominator=9),
    )
    def test_translation_invariance(self, roots, shift):
        p = ExactPoly.from_roots(roots)
        q = p.shift(shift)
        for m in range(2, p.degree + 1):
            assert hankel_delta(p, m) == hankel_delta(q, m)
            # Delta_m is the sum over m-subsets of squared Vandermonde products
            expected = Fraction(0)
            for subset in combinations(roots, m):
                expected += prod((a - b) ** 2 for a, b in combinations(subset, 2))
            assert hankel_delta(p, m) == expected


class TestVerdict:
    def test_degree_two_examples(self):
        table = shared_table()
        v = hankel_verdict(JensenSpec(2, 24), table)
        assert v.values[0] == Fraction(-11744, table[24] ** 2)
        assert not v.hyperbolic
        assert hankel_verdict(JensenSpec(2, 25), table).values[0] == Fraction(162064, table[25] ** 2)

    def test_degree_three_threshold(self):
        table = shared_table()
        assert hankel_verdict(JensenSpec(3, 94), table).hyperbolic
        assert not hankel_verdict(JensenSpec(3, 93), table).hyperbolic

    def test_degree_three_window_against_sympy(self):
        table = shared_table()
        ours = [n for n in range(90, 101) if not is_hyperbolic_hankel(jensen_coefficients(JensenSpec(3, n), table))]
        oracle = [n for n in range(90, 101) if not sympy_hyperbolic(jensen_coefficients(JensenSpec(3, n), table))]
        assert ours == oracle == [91, 93]

    @pytest.mark.parametrize("d", [4, 5])
    def test_agrees_with_sympy_on_samples(self, d):
        table = shared_table()
        for n in list(range(1, 40)) + [205, 206, 380, 381, 1000, 2500]:
            coeffs = jensen_coefficients(JensenSpec(d, n), table)
            assert is_hyperbolic_hankel(coeffs) == sympy_hyperbolic(coeffs) == is_hyperbolic_sturm(ExactPoly(coeffs))


class TestHermiteValues:
    def test_examples(self):
        assert hermite_hankel_exact(2, 2) == 8
        assert hermite_hankel_exact(3, 3) == 864
        assert hermite_hankel_exact(2, 2, "physicists") == 2

    def test_closed_forms(self):
        for d in range(2, 9):
            monic = prod(v**v for v in range(1, d + 1)) * 2 ** (d * (d - 1) // 2)
            assert hermite_hankel_exact(d, d, "monic") == monic
            assert hermite_hankel_exact(d, d, "physicists") == hermite_discriminant_closed_form(d)

    def test_lower_bound(self):
        for d in range(2, 11):
            for m in range(2, d + 1):
                assert hermite_hankel_exact(d, m, "monic") >= 1
                assert hermite_hankel_exact(d, m, "physicists") >= 1

    def test_matches_symbolic(self):
        for d in range(2, 7):
            p = hermite_poly(d)
            for m in range(2, d + 1):
                assert hankel_symbolic(d, m).evaluate(list(p.coeffs)) == hermite_hankel_exact(d, m)

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            hermite_hankel_exact(3, 4)
        with pytest.raises(ValueError):
            hermite_hankel_exact(3, 2, "probabilists")
