"""Threshold certificates: ``D_{d,m}(n) > 0`` for every ``n`` above ``n0``.

For ``w = w(n) <= eps`` the ratios ``p(n+j)/p(n)`` equal ``A_s(j, w) + E_j w^s``
with ``|E_j|`` bounded by :func:`taylor_error_bound`.  Substituting into the
Hankel polynomial and flooring every coefficient above ``w^(k+1)`` gives a
lower-bound polynomial in ``w`` with at most one sign change, so positivity at
``eps`` implies positivity on ``(0, eps]``.
"""

from __future__ import annotations

import datetime as _dt
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, floor

from ..asymptotics import ShiftRatio
from ..hankel import hankel_symbolic, hermite_hankel_exact, sym_add, sym_mul
from ..interval import DEFAULT_PREC, DomainError, IntervalScalar, c_const, interval
from .expansion import CancellationError, ErrorPoly, MinimizedPoly, SeriesInput, expand_with_errors, minimize
from .taylor import SUP_STRATEGIES, TaylorErrorBound, taylor_error_bound, taylor_of_R

SCHEMA_VERSION = 1
ESCALATED_PREC = 256


class CertificateFormatError(ValueError):
    """Malformed certificate document (wrong fields or types)."""


@dataclass(frozen=True)
class CertificateConfig:
    d: int
    epsilon: Fraction
    s: int = 10
    sup_strategy: str = "branch_and_bound"
    precision: int = DEFAULT_PREC

    def __post_init__(self):
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if self.d < 2:
            raise ValueError("certification needs d >= 2")
        if self.s < 2:
            raise ValueError("Taylor order s must be at least 2")
        if self.sup_strategy not in SUP_STRATEGIES:
            raise ValueError(f"unknown sup strategy {self.sup_strategy!r}")
        if not 0 < self.epsilon or (c_const(64) * self.epsilon**2).lower > 1:
            raise ValueError("epsilon must lie in (0, 1/sqrt(c)]")


def k_of(m: int) -> int:
    return 3 * m * (m - 1) // 2


def threshold_n0(epsilon, prec: int = DEFAULT_PREC) -> int:
    """``floor(1/(c eps^2) + 1/24)``, with the precision raised until the floor is certain."""
    eps = Fraction(epsilon)
    while True:
        x = 1 / (c_const(prec) * eps**2) + Fraction(1, 24)
        lo, hi = floor(x.lower), floor(x.upper)
        if lo == hi:
            return lo
        prec *= 2


def lower_coefficients(coeffs) -> list[Fraction]:
    return [c.lower for c in coeffs]


def sign_changes(values) -> int:
    signs = [1 if v > 0 else -1 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def lower_value_at(values, eps: Fraction) -> Fraction:
    """Exact value of ``sum values[i] eps^i``."""
    acc = Fraction(0)
    for v in reversed(values):
        acc = acc * eps + v
    return acc


@dataclass(frozen=True)
class MinorCertificate:
    """Outcome for one minor size ``m``."""

    m: int
    k: int
    coefficients: tuple[IntervalScalar, ...]
    value_at_epsilon: IntervalScalar
    sign_changes: int
    ok: bool
    note: str = ""

    @property
    def leading(self) -> IntervalScalar:
        return self.coefficients[0]


def judge(coeffs, epsilon: Fraction) -> tuple[IntervalScalar, int, bool, str]:
    """Positivity test on ``(0, eps]`` for the polynomial of lower endpoints."""
    lows = lower_coefficients(coeffs)
    changes = sign_changes(lows)
    exact = lower_value_at(lows, epsilon)
    prec = coeffs[0].prec
    value = interval(exact, prec)
    if lows[0] <= 0:
        return value, changes, False, "constant coefficient not positive"
    if changes > 1:
        return value, changes, False, "more than one sign change"
    if exact <= 0:
        return value, changes, False, "choose smaller epsilon"
    return value, changes, True, ""


@dataclass(frozen=True)
class HyperbolicityCertificate:
    config: CertificateConfig
    taylor_error_bounds: tuple[TaylorErrorBound, ...]
    per_m: tuple[MinorCertificate, ...]
    threshold_n0: int
    verified: bool
    precision_used: int
    timestamp: str = field(default_factory=lambda: _dt.datetime.now(_dt.timezone.utc).isoformat())
    failure: str = ""

    @property
    def diagnostics(self) -> list[str]:
        lines = [f"d={self.config.d}: {self.failure}"] if self.failure else []
        return lines + [f"d={self.config.d} m={mc.m}: {mc.note}" for mc in self.per_m if not mc.ok]

    def error_bound(self, j: int) -> Fraction:
        return next(b.bound for b in self.taylor_error_bounds if b.j == j)


def hankel_inputs(d: int, s: int, prec: int) -> list[SeriesInput]:
    """``a_0 = 1`` and ``a_j = binom(d, j) (A_s(j, w) + E_j w^s)`` for ``j = 1..d``."""
    inputs = [SeriesInput((interval(1, prec),))]
    for j in range(1, d + 1):
        ser = taylor_of_R(ShiftRatio(j, prec), s - 1)
        b = comb(d, j)
        inputs.append(SeriesInput(tuple(x * b for x in ser.coeffs), j, Fraction(b)))
    return inputs


def expand_D_with_errors(cfg: CertificateConfig, m: int, bounds: dict[int, Fraction],
                         prec: int | None = None) -> tuple[ErrorPoly, MinimizedPoly]:
    """Expansion of ``D_{d,m}`` with error symbols and its minimized lower-bound polynomial."""
    prec = prec or cfg.precision
    terms = hankel_symbolic(cfg.d, m).as_dict()
    poly = expand_with_errors(terms, hankel_inputs(cfg.d, cfg.s, prec), cfg.s, prec)
    return poly, minimize(poly, k_of(m), bounds)


def leading_term_expected(d: int, m: int, prec: int = DEFAULT_PREC) -> IntervalScalar:
    """``(c/sqrt 2)^(m(m-1)) Delta_m(H_d)`` for the Hermite polynomial with leading coefficient ``2^d``."""
    return (c_const(prec).sqr() / 2) ** (m * (m - 1) // 2) * hermite_hankel_exact(d, m, "physicists")


def compute_error_bounds(d_shifts, s: int, epsilon: Fraction, strategy: str,
                         prec: int = DEFAULT_PREC) -> tuple[TaylorErrorBound, ...]:
    return tuple(taylor_error_bound(ShiftRatio(j, prec), s, epsilon, strategy) for j in d_shifts)


def _certify_minors(cfg: CertificateConfig, bounds: dict[int, Fraction], prec: int) -> list[MinorCertificate]:
    out = []
    for m in range(2, cfg.d + 1):
        k = k_of(m)
        try:
            _, mp = expand_D_with_errors(cfg, m, bounds, prec)
        except CancellationError as exc:
            out.append(MinorCertificate(m, k, (), interval(0, prec), 0, False, f"cancellation: {exc}"))
            continue
        value, changes, ok, note = judge(mp.coefficients, cfg.epsilon)
        out.append(MinorCertificate(m, k, mp.coefficients, value, changes, ok, note))
    return out


def certify_threshold(cfg: CertificateConfig,
                      error_bounds: tuple[TaylorErrorBound, ...] | None = None) -> HyperbolicityCertificate:
    """Certify hyperbolicity of ``J^{d,n}`` for every ``n > n0``."""
    if error_bounds is None:
        try:
            error_bounds = compute_error_bounds(range(1, cfg.d + 1), cfg.s, cfg.epsilon, cfg.sup_strategy,
                                                cfg.precision)
        except DomainError as exc:
            return HyperbolicityCertificate(cfg, (), (), threshold_n0(cfg.epsilon), False, cfg.precision,
                                            failure=f"error bounds unavailable: {exc}")
    bounds = {b.j: b.bound for b in error_bounds}
    prec = cfg.precision
    per_m = _certify_minors(cfg, bounds, prec)
    if not all(mc.ok for mc in per_m) and prec < ESCALATED_PREC:
        prec = ESCALATED_PREC
        per_m = _certify_minors(cfg, bounds, prec)
    return HyperbolicityCertificate(cfg, tuple(error_bounds), tuple(per_m), threshold_n0(cfg.epsilon),
                                    all(mc.ok for mc in per_m), prec)


# -- the ratio inequality for u_n = p(n+1) p(n-1) / p(n)^2 ---------------------

CHEN_LABELS = (-1, 1, 2)


def _mono(**exps) -> dict:
    order = ("one", "am", "a1", "a2", "z")
    return {tuple(exps.get(v, 0) for v in order): 1}


def chen_polynomial() -> dict:
    """``(1 + z)(a1^2 - am a1 a2)^2 - 4 a1^2 (1 - am a1)(a1^2 - a2)``, homogenized with ``one``.

    Variables are ``(one, am, a1, a2, z)`` where ``am`` stands for ``a_{-1}``.
    """
    inner = sym_add(_mono(one=1, a1=2), _mono(am=1, a1=1, a2=1), -1)
    sq = sym_mul(inner, inner)
    left = sym_mul(sym_add(_mono(one=1), _mono(z=1)), sq)
    f1 = sym_add(_mono(one=2), _mono(am=1, a1=1), -1)
    f2 = sym_add(_mono(a1=2), _mono(one=1, a2=1), -1)
    right = sym_mul(sym_mul(_mono(a1=2), f1), f2)
    right = sym_mul(right, _mono(one=1))
    return sym_add(left, right, -4)


CHEN_K = 10


@dataclass(frozen=True)
class ChenCertificate:
    s: int
    epsilon: Fraction
    variant: str
    taylor_error_bounds: tuple[TaylorErrorBound, ...]
    leading: IntervalScalar
    leading_expected: IntervalScalar
    coefficients: tuple[IntervalScalar, ...]
    value_at_epsilon: IntervalScalar
    sign_changes: int
    threshold_n0: int
    verified: bool
    note: str = ""


def chen_z_coefficients(variant: str, prec: int) -> tuple[IntervalScalar, ...]:
    """Series standing in for ``pi / (sqrt 24 n^(3/2))``.

    ``"cubic"`` uses ``(c^2/4) w^3``, which exceeds the true factor.  ``"strict"``
    uses ``(c^2/4) w^3 - (c^3/64) w^5``, a lower bound of the true factor that
    follows from ``(1 + x)^(-3/2) >= 1 - 3x/2`` with ``x = c w^2 / 24``.
    """
    c = c_const(prec)
    zero = interval(0, prec)
    coeffs = [zero, zero, zero, c.sqr() / 4]
    if variant == "strict":
        coeffs += [zero, -(c**3) / 64]
    elif variant != "cubic":
        raise ValueError(f"unknown variant {variant!r}")
    return tuple(coeffs)


def chen_certificate(s: int = 6, epsilon=Fraction(13, 1000), variant: str = "cubic",
                     sup_strategy: str = "branch_and_bound", prec: int = DEFAULT_PREC,
                     error_bounds: tuple[TaylorErrorBound, ...] | None = None) -> ChenCertificate:
    """Certify the w-form of the ratio inequality for every ``n`` with ``w(n) <= eps``."""
    epsilon = Fraction(epsilon)
    if error_bounds is None:
        error_bounds = compute_error_bounds(CHEN_LABELS, s, epsilon, sup_strategy, prec)
    bounds = {b.j: b.bound for b in error_bounds}
    note = ""
    for attempt_prec in (prec, ESCALATED_PREC):
        inputs = [SeriesInput((interval(1, attempt_prec),))]
        for j in CHEN_LABELS:
            ser = taylor_of_R(ShiftRatio(j, attempt_prec), s - 1)
            inputs.append(SeriesInput(tuple(ser.coeffs), j, Fraction(1)))
        inputs.append(SeriesInput(chen_z_coefficients(variant, attempt_prec)))
        poly = expand_with_errors(chen_polynomial(), inputs, s, attempt_prec)
        expected = c_const(attempt_prec) ** 6 * Fraction(25, 64)
        try:
            mp = minimize(poly, CHEN_K, bounds, exact_upto=CHEN_K)
        except CancellationError as exc:
            note = f"cancellation: {exc}"
            if attempt_prec >= ESCALATED_PREC:
                zero = interval(0, attempt_prec)
                return ChenCertificate(s, epsilon, variant, tuple(error_bounds), poly.pure.get(CHEN_K, zero),
                                       expected, (), zero, 0, threshold_n0(epsilon), False, note)
            continue
        value, changes, ok, note = judge(mp.coefficients, epsilon)
        if ok or attempt_prec >= ESCALATED_PREC:
            break
    leading = mp.coefficients[0]
    ok = ok and leading.intersects(expected)
    if not leading.intersects(expected):
        note = "leading coefficient differs from 25 c^6 / 64"
    return ChenCertificate(s, epsilon, variant, tuple(error_bounds), leading, expected, mp.coefficients,
                           value, changes, threshold_n0(epsilon), ok, note)


# -- serialization --------------------------------------------------------------

def _interval_json(x: IntervalScalar) -> list[str]:
    return list(x.decimal_strings())


def _decimal(q: Fraction) -> str:
    return interval(q, 2 + max(64, q.numerator.bit_length(), q.denominator.bit_length())).decimal_strings()[1]


def certificate_to_json(cert: HyperbolicityCertificate) -> dict:
    cfg = cert.config
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "hyperbolicity",
        "d": cfg.d,
        "s": cfg.s,
        "epsilon": _fraction_text(cfg.epsilon),
        "precision_bits": cert.precision_used,
        "sup_strategy": cfg.sup_strategy,
        "error_bounds": [{"j": b.j, "bound": _decimal(b.bound),
                          "derivative_part": _decimal(b.first.upper),
                          "ratio_part": _decimal(b.second.upper)} for b in cert.taylor_error_bounds],
        "per_m": [{"m": mc.m, "k": mc.k,
                   "coefficients": [_interval_json(c) for c in mc.coefficients],
                   "value_at_epsilon": _interval_json(mc.value_at_epsilon),
                   "sign_changes": mc.sign_changes,
                   "ok": mc.ok} for mc in cert.per_m],
        "threshold_n0": cert.threshold_n0,
        "verified": cert.verified,
        "timestamp": cert.timestamp,
    }


def _fraction_text(q: Fraction) -> str:
    """Exact decimal text for a rational with a terminating expansion, else ``p/q``."""
    den = q.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{q.numerator}/{q.denominator}"
    digits = max(twos, fives)
    scaled = q * 10**digits
    sign = "-" if scaled < 0 else ""
    text = str(abs(scaled.numerator)).rjust(digits + 1, "0")
    if digits == 0:
        return sign + text
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


def dump_certificate(cert: HyperbolicityCertificate, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(certificate_to_json(cert), fh, indent=2)
        fh.write("\n")


_REQUIRED = {
    "schema_version": int, "d": int, "s": int, "epsilon": str, "precision_bits": int, "sup_strategy": str,
    "error_bounds": list, "per_m": list, "threshold_n0": int, "verified": bool,
}
_REQUIRED_M = {"m": int, "k": int, "coefficients": list, "value_at_epsilon": list, "sign_changes": int}


def _check_fields(doc: dict, schema: dict, where: str) -> None:
    if not isinstance(doc, dict):
        raise CertificateFormatError(f"{where}: expected an object")
    for name, typ in schema.items():
        if name not in doc:
            raise CertificateFormatError(f"{where}: missing field {name!r}")
        value = doc[name]
        if typ is int and (isinstance(value, bool) or not isinstance(value, int)):
            raise CertificateFormatError(f"{where}: field {name!r} must be an integer")
        if not isinstance(value, typ):
            raise CertificateFormatError(f"{where}: field {name!r} must be {typ.__name__}")


def _parse_pair(pair, where: str) -> tuple[Fraction, Fraction]:
    if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, str) for x in pair)):
        raise CertificateFormatError(f"{where}: expected [lo, hi] decimal strings")
    try:
        lo, hi = Fraction(pair[0]), Fraction(pair[1])
    except (ValueError, ZeroDivisionError) as exc:
        raise CertificateFormatError(f"{where}: {exc}") from None
    return lo, hi


def verify_certificate_document(doc: dict) -> list[str]:
    """Re-check a serialized certificate; return the list of failed invariants.

    Raises :class:`CertificateFormatError` for schema problems.  Sup bounds are
    not recomputed; the sign pattern, the value at ``eps`` and the threshold
    formula are.
    """
    _check_fields(doc, _REQUIRED, "certificate")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise CertificateFormatError(f"unsupported schema_version {doc['schema_version']}")
    try:
        eps = Fraction(doc["epsilon"])
    except (ValueError, ZeroDivisionError) as exc:
        raise CertificateFormatError(f"epsilon: {exc}") from None
    problems: list[str] = []
    if eps <= 0:
        problems.append("epsilon must be positive")
        return problems
    seen = set()
    all_ok = True
    for idx, entry in enumerate(doc["per_m"]):
        _check_fields(entry, _REQUIRED_M, f"per_m[{idx}]")
        m, k = entry["m"], entry["k"]
        seen.add(m)
        if k != k_of(m):
            problems.append(f"m={m}: k={k} is not 3m(m-1)/2")
        pairs = [_parse_pair(p, f"per_m[{idx}].coefficients") for p in entry["coefficients"]]
        if not pairs:
            problems.append(f"m={m}: no coefficients")
            all_ok = False
            continue
        if any(lo > hi for lo, hi in pairs):
            problems.append(f"m={m}: interval with lo > hi")
        lows = [lo for lo, _ in pairs]
        changes = sign_changes(lows)
        value = lower_value_at(lows, eps)
        ok = lows[0] > 0 and changes <= 1 and value > 0
        all_ok = all_ok and ok
        if changes != entry["sign_changes"]:
            problems.append(f"m={m}: recorded sign_changes {entry['sign_changes']} but found {changes}")
        if lows[0] <= 0:
            problems.append(f"m={m}: constant coefficient not positive")
        if changes > 1:
            problems.append(f"m={m}: more than one sign change")
        if value <= 0:
            problems.append(f"m={m}: lower-bound polynomial not positive at epsilon")
        v_lo, v_hi = _parse_pair(entry["value_at_epsilon"], f"per_m[{idx}].value_at_epsilon")
        if not v_lo <= value <= v_hi:
            problems.append(f"m={m}: recorded value at epsilon does not enclose the recomputed value")
    if seen != set(range(2, doc["d"] + 1)):
        problems.append("per_m does not cover m = 2..d")
        all_ok = False
    if doc["threshold_n0"] != threshold_n0(eps):
        problems.append(f"threshold_n0 {doc['threshold_n0']} differs from floor(1/(c eps^2) + 1/24)")
    if doc["verified"] != all_ok:
        problems.append("verified flag disagrees with the per-m checks")
    if not doc["verified"]:
        problems.append("certificate does not claim verification")
    return problems


def certificate_summary(cert: HyperbolicityCertificate) -> str:
    lines = [f"d={cert.config.d} s={cert.config.s} eps={_fraction_text(cert.config.epsilon)} "
             f"precision={cert.precision_used} verified={cert.verified} n0={cert.threshold_n0}"]
    for b in cert.taylor_error_bounds:
        lines.append(f"  |E_{b.j}| <= {float(b.first.upper):.6g} + {float(b.second.upper):.6g}")
    for mc in cert.per_m:
        lead = float(mc.leading.lower) if mc.coefficients else math.nan
        lines.append(f"  m={mc.m} k={mc.k} c0={lead:.6g} value(eps)={float(mc.value_at_epsilon.lower):.6g} "
                     f"sign_changes={mc.sign_changes} {'ok' if mc.ok else mc.note}")
    return "\n".join(lines)
