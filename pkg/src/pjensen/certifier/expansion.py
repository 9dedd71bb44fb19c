"""Substitution of truncated series with error symbols into a polynomial.

Every input variable ``x_v`` is replaced by ``P_v(w) + scale_v * E_v * w^s``
where ``P_v`` has real (interval) coefficients and ``E_v`` is a symbol known
only through a bound ``|E_v| <= b_v``.  The result is an :class:`ErrorPoly`:
a polynomial in ``w`` whose coefficients are polynomials in the ``E_v``.

Real coefficients are carried as fixed-point balls: an integer midpoint and an
integer radius, both scaled by ``2^P``.  A polynomial in ``w`` with such
coefficients is packed into a single integer by evaluation at ``2^B``
(Kronecker substitution), so a polynomial product is one big-integer product.
Radii propagate through ``rad(fg) <= (|f| + rf)(|g| + rg) - |f||g|`` applied
coefficientwise, which only involves nonnegative packed integers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, prod
from typing import Mapping, Sequence

import gmpy2

from ..interval import IntervalScalar, interval

Monomial = tuple[int, ...]


class CancellationError(ArithmeticError):
    """A coefficient that must vanish has an enclosure excluding zero."""


@dataclass(frozen=True)
class SeriesInput:
    """``x_v = sum coeffs[i] w^i + error_scale * E * w^s`` (no error term if ``label`` is None)."""

    coeffs: tuple[IntervalScalar, ...]
    label: int | None = None
    error_scale: Fraction = Fraction(1)


@dataclass
class ErrorPoly:
    """``sum_i pure[i] w^i + sum_{(i, alpha)} errors[(i, alpha)] w^i E^alpha``.

    ``labels`` names the error symbols in the order used by the exponent
    vectors ``alpha``.
    """

    labels: tuple[int, ...]
    pure: dict[int, IntervalScalar]
    errors: dict[tuple[int, Monomial], IntervalScalar] = field(default_factory=dict)

    def degree(self) -> int:
        keys = list(self.pure) + [i for i, _ in self.errors]
        return max(keys) if keys else 0

    def substitute_zero(self) -> list[IntervalScalar]:
        """Coefficients after setting every error symbol to 0."""
        prec = next(iter(self.pure.values())).prec if self.pure else 128
        return [self.pure.get(i, interval(0, prec)) for i in range(self.degree() + 1)]

    def max_error_degree(self) -> dict[int, int]:
        out = {lab: 0 for lab in self.labels}
        for _, alpha in self.errors:
            for lab, e in zip(self.labels, alpha):
                out[lab] = max(out[lab], e)
        return out

    def errors_by_power(self) -> dict[int, dict[Monomial, IntervalScalar]]:
        out: dict[int, dict[Monomial, IntervalScalar]] = {}
        for (i, alpha), v in self.errors.items():
            out.setdefault(i, {})[alpha] = v
        return out

    def errors_at(self, i: int) -> dict[Monomial, IntervalScalar]:
        return self.errors_by_power().get(i, {})


class _Packer:
    """Kronecker packing of integer polynomials into integers with ``B``-bit slots."""

    def __init__(self, slots: int, bits: int):
        self.slots = slots
        self.bits = (bits + 7) // 8 * 8
        self.nbytes = self.bits // 8
        self.offset = sum(gmpy2.mpz(1) << (self.bits * i + self.bits - 1) for i in range(slots))
        self.half = 1 << (self.bits - 1)

    def pack(self, coeffs: Sequence[int]) -> gmpy2.mpz:
        acc = gmpy2.mpz(0)
        for c in reversed(coeffs):
            acc = (acc << self.bits) + c
        return acc

    def unpack(self, value) -> list[int]:
        shifted = int(value + self.offset)
        if shifted < 0 or shifted.bit_length() > self.bits * self.slots:
            raise OverflowError("packed polynomial exceeds the slot budget")
        raw = shifted.to_bytes(self.nbytes * self.slots, "little")
        n = self.nbytes
        return [int.from_bytes(raw[i * n:(i + 1) * n], "little") - self.half for i in range(self.slots)]


def _to_ball(x: IntervalScalar, scale_bits: int) -> tuple[int, int]:
    lo = x.lower * (1 << scale_bits)
    hi = x.upper * (1 << scale_bits)
    mid = round((lo + hi) / 2)
    rad = max(hi - mid, mid - lo)
    r = int(rad) + (0 if rad == int(rad) else 1)
    return int(mid), max(r, 0)


def _ball_interval(mid: int, rad: int, shift: int, prec: int) -> IntervalScalar:
    den = 1 << shift
    return IntervalScalar(Fraction(mid - rad, den), Fraction(mid + rad, den), prec)


def expand_with_errors(terms: Mapping[Monomial, int], inputs: Sequence[SeriesInput], s: int,
                       prec: int) -> ErrorPoly:
    """Expand ``sum_terms kappa * prod_v x_v^e_v`` with the series inputs substituted.

    The polynomial must be homogeneous (add a variable with value 1 otherwise);
    the fixed-point scale then factors out of every term uniformly.
    """
    nvars = len(inputs)
    degrees = {sum(mono) for mono in terms}
    if len(degrees) > 1:
        raise ValueError("expand_with_errors needs a homogeneous polynomial")
    total = degrees.pop() if degrees else 0
    err_vars = [v for v, inp in enumerate(inputs) if inp.label is not None]
    labels = tuple(inputs[v].label for v in err_vars)
    scale_bits = prec

    mids, mags, rads = [], [], []
    for inp in inputs:
        balls = [_to_ball(c, scale_bits) for c in inp.coeffs]
        mids.append([b[0] for b in balls])
        mags.append([abs(b[0]) for b in balls])
        rads.append([b[1] for b in balls])

    max_len = max(len(c) for c in mids)
    slots = total * (max_len - 1) + 1
    # every unpacked coefficient is bounded by the majorant evaluated at w = 1
    weight = [max(1, sum(m) + sum(r)) for m, r in zip(mags, rads)]
    kappa_sum = sum(abs(k) for k in terms.values())
    bound = kappa_sum * (1 << total) * max(
        (prod(weight[v] ** e for v, e in enumerate(mono)) for mono in terms), default=1)
    packer = _Packer(slots, bound.bit_length() + 3)

    p_mid = [packer.pack(c) for c in mids]
    p_mag = [packer.pack(c) for c in mags]
    p_rad = [packer.pack(c) for c in rads]
    one = gmpy2.mpz(1)
    zero = gmpy2.mpz(0)
    memo: dict[Monomial, tuple] = {(0,) * nvars: (one, one, zero)}

    def power(q: Monomial):
        hit = memo.get(q)
        if hit is not None:
            return hit
        v = next(i for i, e in enumerate(q) if e)
        prev = list(q)
        prev[v] -= 1
        m1, a1, r1 = power(tuple(prev))
        m2, a2, r2 = p_mid[v], p_mag[v], p_rad[v]
        aa = a1 * a2
        out = (m1 * m2, aa, (a1 + r1) * (a2 + r2) - aa)
        memo[q] = out
        return out

    acc: dict[Monomial, list] = {}
    for mono, kappa in terms.items():
        ranges = [range(mono[v] + 1) for v in err_vars]
        for alpha in itertools.product(*ranges):
            q = list(mono)
            weight_ = kappa
            for v, a in zip(err_vars, alpha):
                q[v] -= a
                weight_ *= comb(mono[v], a)
            m, _, r = power(tuple(q))
            slot = acc.get(alpha)
            if slot is None:
                acc[alpha] = [m * weight_, r * abs(weight_)]
            else:
                slot[0] += m * weight_
                slot[1] += r * abs(weight_)

    pure: dict[int, IntervalScalar] = {}
    errors: dict[tuple[int, Monomial], IntervalScalar] = {}
    for alpha, (m, r) in acc.items():
        order = sum(alpha)
        shift = scale_bits * (total - order)
        factor = prod((Fraction(inputs[v].error_scale) ** a for v, a in zip(err_vars, alpha)), start=Fraction(1))
        mid_c = packer.unpack(m)
        rad_c = packer.unpack(r)
        for i, (mc, rc) in enumerate(zip(mid_c, rad_c)):
            if mc == 0 and rc == 0:
                continue
            value = _ball_interval(mc, rc, shift, prec)
            if factor != 1:
                value = value * factor
            if order == 0:
                pure[i] = value
            else:
                errors[(i + s * order, alpha)] = value
    return ErrorPoly(labels, pure, errors)


@dataclass(frozen=True)
class MinimizedPoly:
    """Lower-bound polynomial ``sum coefficients[i] w^i`` for ``D / w^k`` on ``[0, eps]``."""

    k: int
    exact_upto: int  # coefficients with index <= exact_upto - k keep both endpoints
    coefficients: tuple[IntervalScalar, ...]

    def value_at(self, eps) -> IntervalScalar:
        x = eps if isinstance(eps, IntervalScalar) else interval(eps, self.coefficients[0].prec)
        acc = interval(0, x.prec)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc


def _error_sum(terms: Mapping[Monomial, IntervalScalar], labels, bounds: Mapping[int, IntervalScalar],
               prec: int) -> IntervalScalar:
    total = interval(0, prec)
    for alpha, coef in terms.items():
        mag = coef.upper_abs()
        for lab, a in zip(labels, alpha):
            if a:
                mag = mag * bounds[lab] ** a
        total = total + mag
    return total.upper_abs()


def minimize(poly: ErrorPoly, k: int, bounds: Mapping[int, object], exact_upto: int | None = None,
             rel_tol: float = 1e-10) -> MinimizedPoly:
    """Lower-bound polynomial for ``poly / w^k`` given ``|E_v| <= bounds[v]``.

    Coefficients of ``w^i`` with ``i < k`` must vanish: their enclosures must
    contain 0 and be narrow relative to the ``w^k`` coefficient.  For
    ``k <= i <= exact_upto`` the interval coefficient is kept (widened by the
    error terms); above that each coefficient becomes ``min(0, lower bound)``.
    """
    exact_upto = k + 1 if exact_upto is None else exact_upto
    prec = next(iter(poly.pure.values())).prec
    b = {lab: (v if isinstance(v, IntervalScalar) else interval(v, prec)).upper_abs() for lab, v in bounds.items()}
    zero = interval(0, prec)
    grouped = poly.errors_by_power()
    lead = poly.pure.get(k, zero)
    scale = lead.mag() or 1.0
    for i in range(k):
        c = poly.pure.get(i, zero)
        if not c.contains_zero():
            raise CancellationError(f"coefficient of w^{i} does not vanish: {c!r}")
        if c.width() > rel_tol * scale:
            raise CancellationError(f"coefficient of w^{i} too wide to certify cancellation: {c!r}")
        for alpha, e in grouped.get(i, {}).items():
            if not e.contains_zero():
                raise CancellationError(f"error coefficient of w^{i} E^{alpha} does not vanish")
    coeffs = []
    for i in range(k, poly.degree() + 1):
        pure = poly.pure.get(i, zero)
        err = _error_sum(grouped.get(i, {}), poly.labels, b, prec)
        if i <= exact_upto:
            coeffs.append(pure + IntervalScalar.hull(-err, err))
        else:
            low = (pure - err).lower
            low = min(low, Fraction(0))
            coeffs.append(IntervalScalar(low, low, prec))
    return MinimizedPoly(k, exact_upto, tuple(coeffs))
