"""Taylor data of ``R(j, w)`` and rigorous bounds on its remainder.

The coefficients of ``R`` at ``w = 0`` are polynomials in ``t = c j`` with
rational coefficients; they are computed once exactly and then evaluated at an
enclosure of ``t``.  Suprema of ``|R^(s)| / s!`` over ``[0, eps]`` come from
interval Taylor arithmetic on sub-boxes of ``[0, eps]`` with adaptive bisection.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from ..asymptotics import L_of, R_of, ShiftRatio, shifted_w
from ..exact_core import ExactPoly
from ..interval import DomainError, IntervalScalar, c_const, interval
from ..series import SeriesPoly

SUP_STRATEGIES = ("branch_and_bound", "closed_form")
REL_TOL = Fraction(1, 1000)
MAX_DEPTH = 40


def _R_series(t, base, order: int) -> SeriesPoly:
    """Series of ``R(j, base + h)`` in ``h``; ``t`` and ``base`` share one ring."""
    w = SeriesPoly.variable(order, base)
    u = 1 + w * w * t
    q = u.sqrt()
    expo = (w * t / (1 + q)).exp()
    return expo * (q - w) / ((1 - w) * u * q)


@lru_cache(maxsize=None)
def exact_taylor_coefficients(order: int) -> tuple[ExactPoly, ...]:
    """Coefficients of ``w^0..w^order`` of ``R`` as exact polynomials in ``t``."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    t = ExactPoly.x()
    ser = _R_series(t, ExactPoly(), order)
    return tuple(ExactPoly([c]) if not isinstance(c, ExactPoly) else c for c in ser.coeffs)


def taylor_coefficients_in_c(j: int, order: int) -> list[ExactPoly]:
    """Coefficients of ``w^i`` of ``R(j, w)`` as exact polynomials in ``c``."""
    return [ExactPoly(coef * Fraction(j) ** k for k, coef in enumerate(p.coeffs))
            for p in exact_taylor_coefficients(order)]


def taylor_of_R(sr: ShiftRatio, order: int) -> SeriesPoly:
    """Interval coefficients of ``w^0..w^order`` of ``R(j, w)`` at ``w = 0``."""
    if order < 1:
        raise ValueError("order must be at least 1")
    t = sr.t
    return SeriesPoly([p(t) if p.degree > 0 else interval(p(0), sr.prec)
                       for p in exact_taylor_coefficients(order)], order)


def taylor_polynomial_value(sr: ShiftRatio, s: int, w) -> IntervalScalar:
    """``A_s(j, w)``: the degree ``s - 1`` Taylor polynomial evaluated at ``w``."""
    w = w if isinstance(w, IntervalScalar) else interval(w, sr.prec)
    return taylor_of_R(sr, s - 1).evaluate(w)


def derivative_enclosure(sr: ShiftRatio, s: int, box: IntervalScalar) -> IntervalScalar:
    """Enclosure of ``R^(s)(j, x) / s!`` for ``x`` in ``box`` (mean-value form)."""
    mid = interval(box.lower + (box.upper - box.lower) / 2, sr.prec)
    half = IntervalScalar.hull(box - mid, mid - box)
    at_box = _R_series(sr.t, box, s + 1)
    at_mid = _R_series(sr.t, mid, s)
    naive = at_box[s]
    centred = at_mid[s] + at_box[s + 1] * (s + 1) * half
    lo = max(naive.lower, centred.lower)
    hi = min(naive.upper, centred.upper)
    return IntervalScalar(lo, hi, sr.prec)


@dataclass(frozen=True)
class SupBound:
    """Upper bound ``value`` on a supremum, with the best lower witness found."""

    value: IntervalScalar
    witness: IntervalScalar
    boxes: int
    converged: bool
    strategy: str

    @property
    def upper(self) -> Fraction:
        return self.value.upper


def _branch_and_bound(upper_fn, lower_fn, eps: Fraction, prec: int, strategy: str) -> SupBound:
    """Maximize over ``[0, eps]`` with upper bounds per box and point lower bounds."""
    root = IntervalScalar(0, eps, prec)
    best_lo = lower_fn(Fraction(0))
    best_lo = max(best_lo, lower_fn(eps))
    heap = [(-upper_fn(root), 0, Fraction(0), eps)]
    boxes = 1
    converged = False
    while heap:
        neg_ub, depth, a, b = heapq.heappop(heap)
        ub = -neg_ub
        if ub <= best_lo * (1 + REL_TOL) or ub <= 0:
            heapq.heappush(heap, (neg_ub, depth, a, b))
            converged = True
            break
        if depth >= MAX_DEPTH:
            heapq.heappush(heap, (neg_ub, depth, a, b))
            break
        m = (a + b) / 2
        best_lo = max(best_lo, lower_fn(m))
        for lo_, hi_ in ((a, m), (m, b)):
            boxes += 1
            heapq.heappush(heap, (-upper_fn(IntervalScalar(lo_, hi_, prec)), depth + 1, lo_, hi_))
    top = -heap[0][0] if heap else best_lo
    return SupBound(IntervalScalar(best_lo, max(top, best_lo), prec), IntervalScalar(best_lo, best_lo, prec),
                    boxes, converged, strategy)


def _check_eps(sr: ShiftRatio, eps) -> Fraction:
    eps = Fraction(eps) if not isinstance(eps, IntervalScalar) else eps.upper
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    if (c_const(64) * eps**2).lower > 1:
        raise ValueError("epsilon must not exceed 1/sqrt(c)")
    return eps


def sup_abs_derivative(sr: ShiftRatio, s: int, eps, strategy: str = "branch_and_bound") -> SupBound:
    """Rigorous upper bound on ``sup |R^(s)(j, x)| / s!`` over ``x`` in ``[0, eps]``."""
    if s < 1:
        raise ValueError("s must be at least 1")
    eps = _check_eps(sr, eps)
    if strategy == "closed_form":
        value = closed_form_derivative_bound(sr, s, eps) / factorial(s)
        return SupBound(value, interval(0, sr.prec), 0, True, strategy)
    if strategy != "branch_and_bound":
        raise ValueError(f"unknown sup strategy {strategy!r}")

    def upper_fn(box: IntervalScalar) -> Fraction:
        return abs(derivative_enclosure(sr, s, box)).upper

    def lower_fn(x: Fraction) -> Fraction:
        return abs(_R_series(sr.t, interval(x, sr.prec), s)[s]).lower

    return _branch_and_bound(upper_fn, lower_fn, eps, sr.prec, strategy)


def closed_form_derivative_bound(sr: ShiftRatio, m: int, eps) -> IntervalScalar:
    """``m! binom(m+3, 3) e^g(eps) (4 e^(2 t eps) t)^m`` with ``g = t eps / (1 + sqrt(1 + t eps^2))``.

    Valid for shifts ``j >= 1`` and ``t eps <= 1``.
    """
    if sr.j < 1:
        raise ValueError("the closed-form derivative bound needs j >= 1")
    eps_i = eps if isinstance(eps, IntervalScalar) else interval(eps, sr.prec)
    t = sr.t
    if (t * eps_i).upper > 1:
        raise DomainError("closed-form derivative bound needs t * eps <= 1")
    g = t * eps_i / (1 + (1 + t * eps_i.sqr()).sqrt())
    base = (t * eps_i * 2).exp() * t * 4
    return g.exp() * base**m * (factorial(m) * comb(m + 3, 3))


def _l_over_power_upper(x: Fraction, s: int, prec: int) -> IntervalScalar:
    """Upper bound of ``L(y) / y^s`` for all ``y`` in ``(0, x]``.

    Both pieces ``e^(-1/2y)/y^s`` and ``e^(-1/y)/y^(s+2)`` increase on
    ``(0, 1/(s+2)]`` and ``(1+21y)/(1-y)`` increases everywhere below 1.
    """
    if x > Fraction(1, s + 2):
        raise DomainError("monotone bound for L(y)/y^s needs y <= 1/(s+2)")
    xi = interval(x, prec)
    inv = 1 / xi
    first = (1 + 21 * xi) / (1 - xi) * (-inv / 2).exp() / xi**s
    second = (-inv).exp() / (xi ** (s + 2) * (1 - xi))
    return first + second


def _second_upper_on_box(sr: ShiftRatio, s: int, a: Fraction, b: Fraction) -> Fraction:
    prec = sr.prec
    box = IntervalScalar(a, b, prec)
    r_hi = R_of(sr, box).upper
    b_i = interval(b, prec)
    if sr.j >= 0:
        lw = _l_over_power_upper(b, s, prec)
        l_end = L_of(b_i, prec)
    else:
        # L at the shifted argument y = x / sqrt(1 + t x^2) > x; y/x increases with x
        y = shifted_w(sr, b_i)
        y_hi = y.upper
        lw = _l_over_power_upper(y_hi, s, prec) * (y / b_i) ** s
        l_end = L_of(interval(y_hi, prec), prec)
    if not (1 - l_end).is_positive():
        raise DomainError("L >= 1 on the box")
    return (lw * r_hi * 2 / (1 - l_end)).upper


def _second_at_point(sr: ShiftRatio, s: int, x: Fraction) -> Fraction:
    if x == 0:
        return Fraction(0)
    prec = sr.prec
    xi = interval(x, prec)
    y = shifted_w(sr, xi) if sr.j < 0 else xi
    big_l = L_of(y, prec)
    return (R_of(sr, xi) * big_l * 2 / ((1 - big_l) * xi**s)).lower


def sup_ratio_error_term(sr: ShiftRatio, s: int, eps) -> SupBound:
    """Upper bound on ``sup R(j,x) 2L/(x^s (1-L))`` over ``(0, eps]``."""
    eps = _check_eps(sr, eps)
    return _branch_and_bound(
        lambda box: _second_upper_on_box(sr, s, box.lower, box.upper),
        lambda x: _second_at_point(sr, s, x),
        eps, sr.prec, "monotone_branch_and_bound")


@dataclass(frozen=True)
class TaylorErrorBound:
    """Bound ``first + second`` on ``|E_s(j, w)|`` over ``[0, eps]``."""

    j: int
    s: int
    epsilon: Fraction
    first: SupBound
    second: SupBound

    @property
    def total(self) -> IntervalScalar:
        hi = self.first.value.upper + self.second.value.upper
        return IntervalScalar(hi, hi, self.first.value.prec)

    @property
    def bound(self) -> Fraction:
        return self.total.upper


def taylor_error_bound(sr: ShiftRatio, s: int, eps, strategy: str = "branch_and_bound") -> TaylorErrorBound:
    """Bound on ``|(p(n+j)/p(n) - A_s(j, w)) / w^s|`` valid whenever ``w(n) <= eps``."""
    eps = _check_eps(sr, eps)
    first = sup_abs_derivative(sr, s, eps, strategy)
    second = sup_ratio_error_term(sr, s, eps)
    return TaylorErrorBound(sr.j, s, eps, first, second)
