"""Truncated power series over any coefficient ring.

Coefficients may be exact (``int``, ``Fraction``, :class:`ExactPoly`) or
intervals (:class:`IntervalScalar`).  ``exp``, ``sqrt`` and ``reciprocal``
need the corresponding scalar operation on the constant term; for exact rings
only the values that stay exact (``exp(0)``, square roots of rational squares,
inverses of nonzero constants) are accepted.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterable

from .exact_core import ExactPoly
from .interval import IntervalScalar


def _exact_value(x):
    if isinstance(x, ExactPoly):
        if not x.is_constant():
            raise ValueError("series operation needs a constant leading coefficient")
        return x.constant()
    return Fraction(x)


def _const_exp(x):
    if isinstance(x, IntervalScalar):
        return x.exp()
    if _exact_value(x) != 0:
        raise ValueError("exact exp only defined at 0")
    return Fraction(1)


def _const_sqrt(x):
    if isinstance(x, IntervalScalar):
        return x.sqrt()
    q = _exact_value(x)
    if q < 0:
        raise ValueError("sqrt of a negative constant term")
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn != q.numerator or rd * rd != q.denominator:
        raise ValueError("exact sqrt needs a rational square constant term")
    return Fraction(rn, rd)


def _const_inv(x):
    if isinstance(x, IntervalScalar):
        return 1 / x
    q = _exact_value(x)
    if q == 0:
        raise ZeroDivisionError("reciprocal of a series with zero constant term")
    return 1 / q


class SeriesPoly:
    """``sum_k coeffs[k] * h**k + O(h**(order+1))``."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Iterable, order: int):
        cs = list(coeffs)[: order + 1]
        cs += [0] * (order + 1 - len(cs))
        self.coeffs = cs
        self.order = order

    @classmethod
    def variable(cls, order: int, base=0) -> "SeriesPoly":
        """The series of ``base + h``."""
        return cls([base, 1], order)

    @classmethod
    def constant(cls, value, order: int) -> "SeriesPoly":
        return cls([value], order)

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __len__(self) -> int:
        return self.order + 1

    def __repr__(self) -> str:
        return f"SeriesPoly({self.coeffs!r}, order={self.order})"

    def _wrap(self, other) -> "SeriesPoly":
        if isinstance(other, SeriesPoly):
            return other
        return SeriesPoly([other], self.order)

    def __add__(self, other):
        o = self._wrap(other)
        n = min(self.order, o.order)
        return SeriesPoly([self.coeffs[k] + o.coeffs[k] for k in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return SeriesPoly([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if not isinstance(other, SeriesPoly):
            return SeriesPoly([c * other for c in self.coeffs], self.order)
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(n + 1):
            acc = 0
            for i in range(k + 1):
                ai = a[i]
                if isinstance(ai, int) and ai == 0:
                    continue
                bj = b[k - i]
                if isinstance(bj, int) and bj == 0:
                    continue
                acc = acc + ai * bj
            out.append(acc)
        return SeriesPoly(out, n)

    __rmul__ = __mul__

    def reciprocal(self) -> "SeriesPoly":
        a = self.coeffs
        inv0 = _const_inv(a[0])
        out = [inv0]
        for k in range(1, self.order + 1):
            acc = 0
            for i in range(1, k + 1):
                acc = acc + a[i] * out[k - i]
            out.append(-(acc * inv0))
        return SeriesPoly(out, self.order)

    def __truediv__(self, other):
        if isinstance(other, SeriesPoly):
            return self * other.reciprocal()
        return self * _const_inv(other)

    def __rtruediv__(self, other):
        return self._wrap(other) * self.reciprocal()

    def sqrt(self) -> "SeriesPoly":
        a = self.coeffs
        f0 = _const_sqrt(a[0])
        half_inv = _const_inv(f0 * 2)
        out = [f0]
        for k in range(1, self.order + 1):
            acc = a[k]
            for i in range(1, k):
                acc = acc - out[i] * out[k - i]
            out.append(acc * half_inv)
        return SeriesPoly(out, self.order)

    def exp(self) -> "SeriesPoly":
        a = self.coeffs
        out = [_const_exp(a[0])]
        for k in range(1, self.order + 1):
            acc = 0
            for i in range(1, k + 1):
                acc = acc + a[i] * out[k - i] * i
            out.append(acc * Fraction(1, k))
        return SeriesPoly(out, self.order)

    def map(self, fn) -> "SeriesPoly":
        return SeriesPoly([fn(c) for c in self.coeffs], self.order)

    def truncate(self, order: int) -> "SeriesPoly":
        return SeriesPoly(self.coeffs[: order + 1], min(order, self.order))

    def evaluate(self, x):
        """Value of the truncated polynomial at ``x`` (Horner)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc
