"""Exact arithmetic: partition numbers, rational polynomials, Sturm root counts."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd
from typing import Iterable, Sequence

MAX_TABLE = 10**7


class TableTooShort(ValueError):
    pass


@dataclass(frozen=True)
class PartitionTable:
    """Exact values ``p(0), ..., p(max_n)``."""

    values: tuple[int, ...]

    @property
    def max_n(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n: int) -> int:
        if n < 0:
            raise IndexError(n)
        return self.values[n]

    def __len__(self) -> int:
        return len(self.values)

    def require(self, n: int) -> None:
        if n > self.max_n:
            raise TableTooShort(f"partition table covers n <= {self.max_n}, need {n}")


def partition_table(max_n: int) -> PartitionTable:
    """Partition numbers by Euler's pentagonal-number recurrence."""
    if max_n < 0:
        raise ValueError("max_n must be nonnegative")
    if max_n > MAX_TABLE:
        raise MemoryError(f"refusing to tabulate p(n) up to {max_n} (> {MAX_TABLE})")
    # generalized pentagonal numbers k(3k-1)/2 for k = 1, -1, 2, -2, ...
    pent: list[tuple[int, int]] = []
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 > max_n:
            break
        sign = 1 if k % 2 else -1
        pent.append((g1, sign))
        g2 = k * (3 * k + 1) // 2
        if g2 <= max_n:
            pent.append((g2, sign))
        k += 1
    p = [0] * (max_n + 1)
    p[0] = 1
    for n in range(1, max_n + 1):
        total = 0
        for g, sign in pent:
            if g > n:
                break
            if sign > 0:
                total += p[n - g]
            else:
                total -= p[n - g]
        p[n] = total
    return PartitionTable(tuple(p))


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class ExactPoly:
    """Dense univariate polynomial with rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "ExactPoly":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> "ExactPoly":
        out = cls([lead])
        for r in roots:
            out = out * cls([-_frac(r), 1])
        return out

    # -- basic properties --------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, ExactPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == ExactPoly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "ExactPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" + ("" if i == 0 else "*X" if i == 1 else f"*X^{i}"))
        return "ExactPoly(" + " + ".join(terms) + ")"

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant(self) -> Fraction:
        return self[0]

    # -- ring operations ---------------------------------------------
    def _wrap(self, other) -> "ExactPoly":
        if isinstance(other, ExactPoly):
            return other
        return ExactPoly([other])

    def __add__(self, other):
        o = self._wrap(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return ExactPoly(self[i] + o[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return ExactPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if not isinstance(other, ExactPoly):
            s = _frac(other)
            return ExactPoly(c * s for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return ExactPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return ExactPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ExactPoly":
        out = ExactPoly([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "ExactPoly":
        return ExactPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def shift(self, c) -> "ExactPoly":
        """``P(X + c)``."""
        out = ExactPoly()
        lin = ExactPoly([c, 1])
        for a in reversed(self.coeffs):
            out = out * lin + a
        return out

    def scale_roots(self, lam) -> "ExactPoly":
        """Polynomial whose roots are ``lam`` times the roots of ``self``."""
        lam = _frac(lam)
        n = self.degree
        return ExactPoly(c * lam ** (n - i) for i, c in enumerate(self.coeffs))

    def divmod(self, other: "ExactPoly") -> tuple["ExactPoly", "ExactPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return ExactPoly(), self
        quot = [Fraction(0)] * (dq + 1)
        lead = other.lc()
        for k in range(dq, -1, -1):
            q = rem[k + other.degree] / lead
            quot[k] = q
            if q:
                for i, b in enumerate(other.coeffs):
                    rem[k + i] -= q * b
        return ExactPoly(quot), ExactPoly(rem[: other.degree])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def pseudo_remainder(self, other: "ExactPoly") -> "ExactPoly":
        """``|lc(other)|^(deg self - deg other + 1) * self mod other`` (a positive multiple)."""
        delta = self.degree - other.degree
        if delta < 0:
            return self
        return (self * abs(other.lc()) ** (delta + 1)) % other

    def monic(self) -> "ExactPoly":
        if self.is_zero():
            return self
        return self * (1 / self.lc())

    def primitive(self) -> "ExactPoly":
        """Integer polynomial with coprime coefficients and positive multiple of ``self``."""
        if self.is_zero():
            return self
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        return ExactPoly(v // g for v in ints)

    def gcd(self, other: "ExactPoly") -> "ExactPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.pseudo_remainder(b).primitive()
        return a.monic()

    def squarefree_part(self) -> "ExactPoly":
        if self.degree < 1:
            return self
        g = self.gcd(self.derivative())
        return (self // g).primitive()

    def sign_at_pos_inf(self) -> int:
        return (self.lc() > 0) - (self.lc() < 0)

    def sign_at_neg_inf(self) -> int:
        s = self.sign_at_pos_inf()
        return s if self.degree % 2 == 0 else -s


@dataclass(frozen=True)
class JensenSpec:
    d: int
    n: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("Jensen degree d must be positive")
        if self.n < 0:
            raise ValueError("Jensen shift n must be nonnegative")


def jensen_coefficients(spec: JensenSpec, table: PartitionTable) -> list[int]:
    """Integer coefficients ``binom(d, j) p(n + j)``, lowest degree first."""
    table.require(spec.n + spec.d)
    return [comb(spec.d, j) * table[spec.n + j] for j in range(spec.d + 1)]


def jensen_poly(spec: JensenSpec, table: PartitionTable) -> ExactPoly:
    return ExactPoly(jensen_coefficients(spec, table))


def hermite_poly(d: int) -> ExactPoly:
    """Monic Hermite polynomial from ``exp(tX - t^2)``: ``H_{k+1} = X H_k - 2k H_{k-1}``."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    prev, cur = ExactPoly([1]), ExactPoly([0, 1])
    if d == 0:
        return prev
    x = ExactPoly.x()
    for k in range(1, d):
        prev, cur = cur, x * cur - prev * (2 * k)
    return cur


def sturm_chain(p: ExactPoly) -> list[ExactPoly]:
    """Sturm sequence of ``p`` built from positive-multiple pseudo-remainders."""
    chain = [p.primitive(), p.derivative().primitive()]
    while not chain[-1].is_zero() and chain[-1].degree > 0:
        r = -chain[-2].pseudo_remainder(chain[-1])
        if r.is_zero():
            break
        chain.append(r.primitive())
    return [q for q in chain if not q.is_zero()]


def _sign_changes(signs: Sequence[int]) -> int:
    nz = [s for s in signs if s]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def sturm_real_root_count(p: ExactPoly) -> int:
    """Number of distinct real roots of ``p``."""
    if p.is_zero():
        raise ValueError("the zero polynomial has no finite root count")
    q = p.squarefree_part()
    if q.degree < 1:
        return 0
    chain = sturm_chain(q)
    v_neg = _sign_changes([f.sign_at_neg_inf() for f in chain])
    v_pos = _sign_changes([f.sign_at_pos_inf() for f in chain])
    return v_neg - v_pos


def is_hyperbolic_sturm(p: ExactPoly) -> bool:
    """True iff every root of ``p`` is real (repeated roots allowed)."""
    if p.is_zero():
        raise ValueError("the zero polynomial has no finite root count")
    q = p.squarefree_part()
    return sturm_real_root_count(q) == q.degree
