"""Outward-rounded interval arithmetic on mpmath's raw binary floats.

Endpoints are stored as raw ``mpf`` tuples from :mod:`mpmath.libmp`; every
operation rounds the lower endpoint towards -inf and the upper endpoint
towards +inf.  Transcendental functions are evaluated with guard bits and then
widened by a relative ``2**-(prec+4)`` so that the result stays an enclosure
even if the library's last-bit rounding is off.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from mpmath import libmp as _lm

DEFAULT_PREC = 128

_F = _lm.round_floor
_C = _lm.round_ceiling
_ZERO = _lm.fzero
_ONE = _lm.fone
_GUARD = 20


class DomainError(ValueError):
    """An interval argument leaves the domain of the requested function."""


def _lt(a, b) -> bool:
    return _lm.mpf_lt(a, b)


def _le(a, b) -> bool:
    return _lm.mpf_le(a, b)


def _min(*xs):
    best = xs[0]
    for x in xs[1:]:
        if _lt(x, best):
            best = x
    return best


def _max(*xs):
    best = xs[0]
    for x in xs[1:]:
        if _lt(best, x):
            best = x
    return best


def _widen_down(x, prec):
    if x == _ZERO:
        return x
    eps = _lm.mpf_shift(_lm.mpf_abs(x), -(prec + 4))
    return _lm.mpf_sub(x, eps, prec, _F)


def _widen_up(x, prec):
    if x == _ZERO:
        return x
    eps = _lm.mpf_shift(_lm.mpf_abs(x), -(prec + 4))
    return _lm.mpf_add(x, eps, prec, _C)


def _from_rational(q: Fraction, prec: int, rnd):
    return _lm.from_rational(q.numerator, q.denominator, prec, rnd)


def mpf_to_fraction(x) -> Fraction:
    """Exact rational value of a raw mpf tuple."""
    p, q = _lm.to_rational(x)
    return Fraction(int(p), int(q))


def mpf_to_decimal(x) -> str:
    """Exact decimal expansion of a (finite, dyadic) raw mpf."""
    sign, man, exp, _ = x
    man = int(man)
    if man == 0:
        return "0"
    if exp >= 0:
        digits = str(man << exp)
    else:
        scaled = str(man * 5 ** (-exp))
        places = -exp
        if len(scaled) <= places:
            scaled = "0" * (places - len(scaled) + 1) + scaled
        digits = scaled[:-places] + "." + scaled[-places:]
        digits = digits.rstrip("0").rstrip(".")
    return ("-" if sign else "") + digits


class IntervalScalar:
    """Closed interval ``[lo, hi]`` with directed-rounded endpoints."""

    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo, hi=None, prec: int = DEFAULT_PREC):
        if hi is None:
            hi = lo
        self.prec = prec
        self.lo = lo if isinstance(lo, tuple) else _coerce_endpoint(lo, prec, _F)
        self.hi = hi if isinstance(hi, tuple) else _coerce_endpoint(hi, prec, _C)
        if _lt(self.hi, self.lo):
            raise ValueError("interval lower endpoint exceeds upper endpoint")

    # -- construction -------------------------------------------------
    @classmethod
    def exact(cls, value, prec: int = DEFAULT_PREC) -> "IntervalScalar":
        """Tightest enclosure of an int, Fraction, float or decimal string."""
        if isinstance(value, IntervalScalar):
            return value
        return cls(value, value, prec)

    @classmethod
    def hull(cls, a: "IntervalScalar", b: "IntervalScalar") -> "IntervalScalar":
        return cls(_min(a.lo, b.lo), _max(a.hi, b.hi), max(a.prec, b.prec))

    # -- inspection ---------------------------------------------------
    @property
    def lower(self) -> Fraction:
        return mpf_to_fraction(self.lo)

    @property
    def upper(self) -> Fraction:
        return mpf_to_fraction(self.hi)

    def mid(self) -> float:
        return _lm.to_float(_lm.mpf_shift(_lm.mpf_add(self.lo, self.hi), -1))

    def width(self):
        return _lm.to_float(_lm.mpf_sub(self.hi, self.lo, 53, _C))

    def rel_width(self) -> float:
        mag = self.mag()
        if mag == 0:
            return 0.0 if self.lo == self.hi else float("inf")
        return self.width() / mag

    def mag(self) -> float:
        return _lm.to_float(_max(_lm.mpf_abs(self.lo), _lm.mpf_abs(self.hi)))

    def is_positive(self) -> bool:
        return _lt(_ZERO, self.lo)

    def is_negative(self) -> bool:
        return _lt(self.hi, _ZERO)

    def is_nonnegative(self) -> bool:
        return _le(_ZERO, self.lo)

    def contains(self, value) -> bool:
        if isinstance(value, IntervalScalar):
            return _le(self.lo, value.lo) and _le(value.hi, self.hi)
        q = Fraction(value) if not isinstance(value, Fraction) else value
        return self.lower <= q <= self.upper

    def contains_zero(self) -> bool:
        return _le(self.lo, _ZERO) and _le(_ZERO, self.hi)

    def intersects(self, other: "IntervalScalar") -> bool:
        return _le(self.lo, other.hi) and _le(other.lo, self.hi)

    def upper_abs(self) -> "IntervalScalar":
        """Point interval holding an upper bound of ``|x|``."""
        m = _max(_lm.mpf_abs(self.lo), _lm.mpf_abs(self.hi))
        return IntervalScalar(m, m, self.prec)

    def decimal_strings(self) -> tuple[str, str]:
        return mpf_to_decimal(self.lo), mpf_to_decimal(self.hi)

    def __float__(self) -> float:
        return self.mid()

    def __repr__(self) -> str:
        return "[{}, {}]".format(_lm.to_str(self.lo, 12), _lm.to_str(self.hi, 12))

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "IntervalScalar":
        if isinstance(other, IntervalScalar):
            return other
        if isinstance(other, (int, Rational, float, str)):
            return IntervalScalar(other, other, self.prec)
        return NotImplemented

    def __neg__(self):
        return IntervalScalar(_lm.mpf_neg(self.hi), _lm.mpf_neg(self.lo), self.prec)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        p = max(self.prec, o.prec)
        return IntervalScalar(_lm.mpf_add(self.lo, o.lo, p, _F), _lm.mpf_add(self.hi, o.hi, p, _C), p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        p = max(self.prec, o.prec)
        return IntervalScalar(_lm.mpf_sub(self.lo, o.hi, p, _F), _lm.mpf_sub(self.hi, o.lo, p, _C), p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        p = max(self.prec, o.prec)
        a, b, c, d = self.lo, self.hi, o.lo, o.hi
        if _le(_ZERO, a) and _le(_ZERO, c):
            return IntervalScalar(_lm.mpf_mul(a, c, p, _F), _lm.mpf_mul(b, d, p, _C), p)
        lows = [_lm.mpf_mul(x, y, p, _F) for x in (a, b) for y in (c, d)]
        highs = [_lm.mpf_mul(x, y, p, _C) for x in (a, b) for y in (c, d)]
        return IntervalScalar(_min(*lows), _max(*highs), p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.contains_zero():
            raise ZeroDivisionError("interval divisor contains zero")
        p = max(self.prec, o.prec)
        a, b, c, d = self.lo, self.hi, o.lo, o.hi
        lows = [_lm.mpf_div(x, y, p, _F) for x in (a, b) for y in (c, d)]
        highs = [_lm.mpf_div(x, y, p, _C) for x in (a, b) for y in (c, d)]
        return IntervalScalar(_min(*lows), _max(*highs), p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def sqr(self) -> "IntervalScalar":
        p = self.prec
        if self.is_nonnegative():
            return IntervalScalar(_lm.mpf_mul(self.lo, self.lo, p, _F), _lm.mpf_mul(self.hi, self.hi, p, _C), p)
        if _le(self.hi, _ZERO):
            return (-self).sqr()
        m = _max(_lm.mpf_abs(self.lo), self.hi)
        return IntervalScalar(_ZERO, _lm.mpf_mul(m, m, p, _C), p)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise TypeError("only nonnegative integer powers are supported")
        if n == 0:
            return IntervalScalar(1, 1, self.prec)
        if n % 2 == 0:
            return self.sqr() ** (n // 2)
        result = self
        base = self
        n -= 1
        while n:
            if n & 1:
                result = result * base
            base = base.sqr()
            n >>= 1
        return result

    def __abs__(self):
        if self.is_nonnegative():
            return self
        if _le(self.hi, _ZERO):
            return -self
        return IntervalScalar(_ZERO, _max(_lm.mpf_neg(self.lo), self.hi), self.prec)

    # -- elementary functions (all monotone) --------------------------
    def sqrt(self) -> "IntervalScalar":
        if _lt(self.lo, _ZERO):
            raise DomainError("sqrt of an interval reaching below zero")
        p = self.prec
        lo = _lm.mpf_sqrt(self.lo, p + _GUARD, _F)
        hi = _lm.mpf_sqrt(self.hi, p + _GUARD, _C)
        # perfect squares (such as 1) keep their exact root
        lo = lo if _lm.mpf_mul(lo, lo) == self.lo else _widen_down(lo, p)
        hi = hi if _lm.mpf_mul(hi, hi) == self.hi else _widen_up(hi, p)
        return IntervalScalar(lo, hi, p)

    def exp(self) -> "IntervalScalar":
        p = self.prec
        lo = _lm.mpf_exp(self.lo, p + _GUARD, _F)
        hi = _lm.mpf_exp(self.hi, p + _GUARD, _C)
        if self.lo == _ZERO:
            lo = _ONE
        else:
            lo = _widen_down(lo, p)
        hi = _ONE if self.hi == _ZERO else _widen_up(hi, p)
        return IntervalScalar(lo, hi, p)

    def log(self) -> "IntervalScalar":
        if not _lt(_ZERO, self.lo):
            raise DomainError("log of an interval not strictly positive")
        p = self.prec
        lo = _lm.mpf_log(self.lo, p + _GUARD, _F)
        hi = _lm.mpf_log(self.hi, p + _GUARD, _C)
        lo = _ZERO if self.lo == _ONE else _widen_down(lo, p)
        hi = _ZERO if self.hi == _ONE else _widen_up(hi, p)
        return IntervalScalar(lo, hi, p)

    def with_prec(self, prec: int) -> "IntervalScalar":
        return IntervalScalar(self.lo, self.hi, prec)


def _coerce_endpoint(value, prec, rnd):
    if isinstance(value, bool):
        value = int(value)
    if isinstance(value, int):
        return _lm.from_int(value, prec, rnd)
    if isinstance(value, float):
        return _lm.from_float(value, prec, rnd)
    if isinstance(value, str):
        value = Fraction(value)
    if isinstance(value, Rational):
        return _from_rational(Fraction(value), prec, rnd)
    raise TypeError(f"cannot build an interval endpoint from {type(value).__name__}")


@lru_cache(maxsize=None)
def pi(prec: int = DEFAULT_PREC) -> IntervalScalar:
    """Enclosure of pi: correctly rounded values widened by one unit each side."""
    lo = _widen_down(_lm.mpf_pi(prec + _GUARD, _F), prec)
    hi = _widen_up(_lm.mpf_pi(prec + _GUARD, _C), prec)
    return IntervalScalar(lo, hi, prec)


@lru_cache(maxsize=None)
def euler_e(prec: int = DEFAULT_PREC) -> IntervalScalar:
    lo = _widen_down(_lm.mpf_e(prec + _GUARD, _F), prec)
    hi = _widen_up(_lm.mpf_e(prec + _GUARD, _C), prec)
    return IntervalScalar(lo, hi, prec)


@lru_cache(maxsize=None)
def c_const(prec: int = DEFAULT_PREC) -> IntervalScalar:
    """``c = 2 pi^2 / 3``."""
    return pi(prec).sqr() * Fraction(2, 3)


def interval(value, prec: int = DEFAULT_PREC) -> IntervalScalar:
    return IntervalScalar.exact(value, prec)
