"""Interval enclosures of the Hardy-Ramanujan quantities in the variable ``w``.

``w(n) = 1/sqrt(c (n - 1/24))`` with ``c = 2 pi^2 / 3``; ``n -> oo`` is
``w -> 0``.  ``R(j, w)`` approximates ``p(n+j)/p(n)`` and ``L(w)`` bounds the
relative error of the leading Hardy-Ramanujan term ``F(w)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .exact_core import ExactPoly, hermite_poly
from .interval import DEFAULT_PREC, DomainError, IntervalScalar, c_const, interval, pi


@dataclass(frozen=True)
class ShiftRatio:
    """Shift ``j`` of the ratio ``p(n+j)/p(n)``; ``t = c j``."""

    j: int
    prec: int = DEFAULT_PREC

    @property
    def t(self) -> IntervalScalar:
        return c_const(self.prec) * self.j


def _as_interval(w, prec: int) -> IntervalScalar:
    return w if isinstance(w, IntervalScalar) else interval(w, prec)


def w_of(n: int, prec: int = DEFAULT_PREC) -> IntervalScalar:
    if n < 1:
        raise ValueError("w(n) needs n >= 1")
    return 1 / (c_const(prec) * (Fraction(n) - Fraction(1, 24))).sqrt()


def delta_of(n: int, prec: int = DEFAULT_PREC) -> IntervalScalar:
    w = w_of(n, prec)
    return c_const(prec) * w * w.sqrt() / interval(2, prec).sqrt()


def hr_prefactor(prec: int = DEFAULT_PREC) -> IntervalScalar:
    """``pi^2 / (6 sqrt 3)``."""
    return pi(prec).sqr() / (interval(3, prec).sqrt() * 6)


def F_of(w, prec: int = DEFAULT_PREC) -> IntervalScalar:
    """``F(w) = pi^2/(6 sqrt 3) (w^2 - w^3) e^(1/w)``."""
    w = _as_interval(w, prec)
    if not w.is_positive():
        raise DomainError("F(w) needs w > 0")
    return hr_prefactor(w.prec) * w.sqr() * (1 - w) * (1 / w).exp()


def _check_R_domain(t: IntervalScalar, w: IntervalScalar) -> IntervalScalar:
    if not w.is_nonnegative() or not (1 - w).is_positive():
        raise DomainError("R(j, w) needs 0 <= w < 1")
    u = 1 + t * w.sqr()
    if not u.is_positive():
        raise DomainError("R(j, w) needs 1 + c j w^2 > 0")
    return u


def R_of(sr: ShiftRatio, w) -> IntervalScalar:
    """``R(j, w) = e^(tw/(1+sqrt(1+tw^2))) (sqrt(1+tw^2) - w) / ((1-w)(1+tw^2)^(3/2))``."""
    w = _as_interval(w, sr.prec)
    t = sr.t
    u = _check_R_domain(t, w)
    q = u.sqrt()
    expo = (t * w / (1 + q)).exp()
    return expo * (q - w) / ((1 - w) * u * q)


def L_of(w, prec: int = DEFAULT_PREC) -> IntervalScalar:
    """``L(w) = (1+21w)/(1-w) e^(-1/(2w)) + e^(-1/w)/(w^2 - w^3)``."""
    w = _as_interval(w, prec)
    if not w.is_positive() or not (1 - w).is_positive():
        raise DomainError("L(w) needs 0 < w < 1")
    inv = 1 / w
    return (1 + 21 * w) / (1 - w) * (-inv / 2).exp() + (-inv).exp() / (w.sqr() * (1 - w))


def lehmer_B_bound(n: int, N: int, prec: int = DEFAULT_PREC) -> IntervalScalar:
    """Enclosure of Lehmer's bound ``pi^2 N^(-2/3)/sqrt 3 (N^3 w^3 e^(1/(Nw))/2 + 1/6)``."""
    if n < 1 or N < 1:
        raise ValueError("need n >= 1 and N >= 1")
    w = w_of(n, prec)
    nn = interval(N, prec)
    n_pow = (nn.log() * Fraction(-2, 3)).exp()
    inner = nn**3 * w**3 * (1 / (nn * w)).exp() / 2 + Fraction(1, 6)
    return pi(prec).sqr() * n_pow / interval(3, prec).sqrt() * inner


def shifted_w(sr: ShiftRatio, w) -> IntervalScalar:
    """``w(n+j) = w / sqrt(1 + c j w^2)``."""
    w = _as_interval(w, sr.prec)
    return w / (1 + sr.t * w.sqr()).sqrt()


def ratio_error_bound(sr: ShiftRatio, w) -> IntervalScalar:
    """Upper bound ``R 2L/(1-L)`` on ``|p(n+j)/p(n) - R(j, w)|``.

    For ``j < 0`` the shifted argument ``w(n+j)`` exceeds ``w``; ``L`` is then
    taken at the larger argument so the bound covers both error terms.
    """
    w = _as_interval(w, sr.prec)
    r = R_of(sr, w)
    w_eff = shifted_w(sr, w) if sr.j < 0 else w
    big_l = L_of(w_eff, sr.prec)
    if not (1 - big_l).is_positive():
        raise DomainError("L(w) >= 1: w too large for the ratio error bound")
    return r * big_l * 2 / (1 - big_l)


def ratio_enclosure(sr: ShiftRatio, n: int) -> IntervalScalar:
    """Rigorous enclosure of ``p(n+j)/p(n)`` without knowing the partition numbers."""
    w = w_of(n, sr.prec)
    r = R_of(sr, w)
    err = ratio_error_bound(sr, w)
    return r + IntervalScalar.hull(-err, err)


def _interval_poly_mul(a: list, b: list) -> list:
    out = [interval(0, a[0].prec)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def hermite_limit_check(d: int, n: int, shift: str = "exp", prec: int = DEFAULT_PREC) -> dict:
    """Coefficients of ``2^d/(p(n) delta^d) J^{d,n}(delta X - shift)`` next to the
    Hermite polynomial with leading coefficient ``2^d``.

    The ratios ``p(n+j)/p(n)`` come from :func:`ratio_enclosure`, so ``n`` may
    be far beyond any partition table.  ``shift`` is ``"exp"`` for
    ``exp(-c w/2)``, ``"ratio"`` for ``p(n)/p(n+1)`` or ``"one"`` for 1.
    """
    w = w_of(n, prec)
    delta = delta_of(n, prec)
    if shift == "exp":
        s = (-(c_const(prec) * w) / 2).exp()
    elif shift == "one":
        s = interval(1, prec)
    elif shift == "ratio":
        s = 1 / ratio_enclosure(ShiftRatio(1, prec), n)
    else:
        raise ValueError(f"unknown shift {shift!r}")
    lin = [-s, delta]
    total = [interval(0, prec)] * (d + 1)
    power = [interval(1, prec)]
    for j in range(d + 1):
        a_j = interval(1, prec) if j == 0 else ratio_enclosure(ShiftRatio(j, prec), n)
        for k, coef in enumerate(power):
            total[k] = total[k] + coef * a_j * comb(d, j)
        power = _interval_poly_mul(power, lin)
    scale = interval(2**d, prec) / delta**d
    coeffs = [x * scale for x in total]
    target = hermite_physicists(d)
    return {
        "coefficients": coeffs,
        "hermite": [target[k] for k in range(d + 1)],
        "max_abs_deviation": max(abs(float(x) - float(target[k])) for k, x in enumerate(coeffs)),
    }


def hermite_physicists(d: int) -> ExactPoly:
    """``H_d`` with leading coefficient ``2^d`` (roots of the monic one halved)."""
    return hermite_poly(d).scale_roots(Fraction(1, 2)) * 2**d
