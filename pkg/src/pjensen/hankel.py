"""Hankel determinants of power sums and Hermite's hyperbolicity criterion.

``D_{d,m}(a_0, ..., a_d) = a_d^(2m-2) * det(S_{i+j})_{0 <= i,j < m}`` where the
``S_k`` are the power sums of the roots of ``sum a_i X^i``.  The symbolic form
is built once per ``(d, m)`` from Newton's identities for the monic polynomial
and then homogenized with ``a_d``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import prod
from typing import Sequence

from .exact_core import ExactPoly, JensenSpec, PartitionTable, hermite_poly, jensen_coefficients

Monomial = tuple[int, ...]
SymPoly = dict[Monomial, int]


def sym_add(p: SymPoly, q: SymPoly, scale: int = 1) -> SymPoly:
    out = dict(p)
    for mono, c in q.items():
        v = out.get(mono, 0) + scale * c
        if v:
            out[mono] = v
        else:
            out.pop(mono, None)
    return out


def sym_mul(p: SymPoly, q: SymPoly) -> SymPoly:
    out: SymPoly = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            mono = tuple(a + b for a, b in zip(m1, m2))
            v = out.get(mono, 0) + c1 * c2
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
    return out


def _const(d: int, value: int) -> SymPoly:
    return {(0,) * (d + 1): value} if value else {}


def _var(d: int, i: int) -> SymPoly:
    mono = [0] * (d + 1)
    mono[i] = 1
    return {tuple(mono): 1}


def power_sums_symbolic(d: int, k_max: int) -> list[SymPoly]:
    """Power sums ``S_0..S_{k_max}`` of the roots as polynomials in ``b_i = a_i / a_d``.

    Monomials are exponent vectors over ``(a_0, ..., a_d)``; the exponent of
    ``a_d`` is always zero because the polynomial has been made monic.  A
    homogeneous form of degree ``k`` is recovered by multiplying each monomial
    by the missing power of ``a_d``.
    """
    if d < 1 or k_max < 0:
        raise ValueError("need d >= 1 and k_max >= 0")
    sums: list[SymPoly] = [_const(d, d)]
    for k in range(1, k_max + 1):
        acc: SymPoly = {}
        for i in range(1, min(k - 1, d) + 1):
            acc = sym_add(acc, sym_mul(_var(d, d - i), sums[k - i]), -1)
        if k <= d:
            acc = sym_add(acc, _var(d, d - k), -k)
        sums.append(acc)
    return sums


def evaluate_sympoly(poly: SymPoly, values: Sequence) -> object:
    """Exact evaluation of a term map at the given coefficient values."""
    maxexp = [0] * len(values)
    for mono in poly:
        for i, e in enumerate(mono):
            if e > maxexp[i]:
                maxexp[i] = e
    pows = []
    for v, top in zip(values, maxexp):
        row = [1]
        for _ in range(top):
            row.append(row[-1] * v)
        pows.append(row)
    total = 0
    for mono, c in poly.items():
        term = c
        for i, e in enumerate(mono):
            if e:
                term = term * pows[i][e]
        total += term
    return total


def _hankel_det(entries: list[list[SymPoly]], d: int) -> SymPoly:
    m = len(entries)

    @lru_cache(maxsize=None)
    def minor(row: int, cols: frozenset) -> tuple:
        if row == m:
            return tuple(_const(d, 1).items())
        acc: SymPoly = {}
        ordered = sorted(cols)
        for pos, j in enumerate(ordered):
            sub = dict(minor(row + 1, cols - {j}))
            if not sub or not entries[row][j]:
                continue
            acc = sym_add(acc, sym_mul(entries[row][j], sub), -1 if pos % 2 else 1)
        return tuple(acc.items())

    return dict(minor(0, frozenset(range(m))))


@dataclass(frozen=True)
class SymbolicHankel:
    """``D_{d,m}`` as a map from exponent vectors over ``a_0..a_d`` to integers."""

    d: int
    m: int
    terms: tuple[tuple[Monomial, int], ...]

    @property
    def term_count(self) -> int:
        return len(self.terms)

    def as_dict(self) -> SymPoly:
        return dict(self.terms)

    def evaluate(self, coeffs: Sequence):
        if len(coeffs) != self.d + 1:
            raise ValueError(f"expected {self.d + 1} coefficients")
        return evaluate_sympoly(self.as_dict(), coeffs)

    def is_homogeneous(self) -> bool:
        return all(sum(mono) == 2 * self.m - 2 for mono, _ in self.terms)


_cache: dict[tuple[int, int], SymbolicHankel] = {}
_cache_lock = threading.Lock()


def hankel_symbolic(d: int, m: int) -> SymbolicHankel:
    """Cached symbolic ``D_{d,m}``."""
    if not 2 <= m <= d:
        raise ValueError("need 2 <= m <= d")
    key = (d, m)
    hit = _cache.get(key)
    if hit is not None:
        return hit
    with _cache_lock:
        hit = _cache.get(key)
        if hit is None:
            hit = _build_hankel(d, m)
            _cache[key] = hit
    return hit


def _build_hankel(d: int, m: int) -> SymbolicHankel:
    sums = power_sums_symbolic(d, 2 * m - 2)
    entries = [[sums[i + j] for j in range(m)] for i in range(m)]
    monic = _hankel_det(entries, d)
    top = 2 * m - 2
    terms = []
    for mono, coef in monic.items():
        deg = sum(mono)
        if deg > top:
            raise ArithmeticError("Hankel determinant is not polynomial of degree 2m-2")
        full = list(mono)
        full[d] += top - deg
        terms.append((tuple(full), coef))
    terms.sort()
    return SymbolicHankel(d, m, tuple(terms))


def power_sums_numeric(coeffs: Sequence, k_max: int) -> list[Fraction]:
    """Exact power sums of the roots of ``sum coeffs[i] X^i``."""
    d = len(coeffs) - 1
    lead = Fraction(coeffs[d])
    b = [Fraction(c) / lead for c in coeffs]
    sums = [Fraction(d)]
    for k in range(1, k_max + 1):
        acc = Fraction(0)
        for i in range(1, min(k - 1, d) + 1):
            acc -= b[d - i] * sums[k - i]
        if k <= d:
            acc -= k * b[d - k]
        sums.append(acc)
    return sums


def det_fraction(matrix: list[list[Fraction]]) -> Fraction:
    """Determinant by exact Gaussian elimination."""
    a = [list(map(Fraction, row)) for row in matrix]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f:
                for k in range(col, n):
                    a[r][k] -= f * a[col][k]
    return det


def hankel_delta(p: ExactPoly | Sequence, m: int) -> Fraction:
    """``Delta_m`` of a polynomial, from its power sums."""
    coeffs = p.coeffs if isinstance(p, ExactPoly) else p
    sums = power_sums_numeric(coeffs, 2 * m - 2)
    return det_fraction([[sums[i + j] for j in range(m)] for i in range(m)])


@dataclass(frozen=True)
class HankelVerdict:
    d: int
    n: int
    values: tuple[Fraction, ...]  # D_{d,m}(n) for m = 2..d
    hyperbolic: bool


def hankel_values_from_coeffs(coeffs: Sequence[int]) -> list:
    d = len(coeffs) - 1
    return [hankel_symbolic(d, m).evaluate(coeffs) for m in range(2, d + 1)]


def hankel_verdict(spec: JensenSpec, table: PartitionTable) -> HankelVerdict:
    """Exact ``D_{d,m}(J^{d,n} / p(n))`` for ``m = 2..d`` and Hermite's verdict."""
    coeffs = jensen_coefficients(spec, table)
    pn = table[spec.n]
    values = tuple(
        Fraction(v, pn ** (2 * m - 2)) for m, v in zip(range(2, spec.d + 1), hankel_values_from_coeffs(coeffs))
    )
    return HankelVerdict(spec.d, spec.n, values, all(v >= 0 for v in values))


def is_hyperbolic_hankel(coeffs: Sequence[int]) -> bool:
    """Hermite's criterion on integer coefficients (sign is scale invariant)."""
    return all(v >= 0 for v in hankel_values_from_coeffs(coeffs))


def hermite_hankel_exact(d: int, m: int, convention: str = "monic") -> Fraction:
    """``Delta_m(H_d)``; ``convention`` is ``"monic"`` (``exp(tX - t^2)``) or
    ``"physicists"`` (leading coefficient ``2^d``, roots halved)."""
    if not 2 <= m <= d:
        raise ValueError("need 2 <= m <= d")
    value = hankel_delta(hermite_poly(d), m)
    if convention == "monic":
        return value
    if convention == "physicists":
        return value / 2 ** (m * (m - 1))
    raise ValueError(f"unknown Hermite convention {convention!r}")


def hermite_discriminant_closed_form(d: int) -> Fraction:
    """``2^(-d(d-1)/2) prod nu^nu``: ``Delta_d`` of the physicists' ``H_d``."""
    return Fraction(prod(v**v for v in range(1, d + 1)), 2 ** (d * (d - 1) // 2))
