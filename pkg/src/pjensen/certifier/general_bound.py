"""Log-space evaluation of the explicit bounds for general degree ``d``.

All quantities are natural logarithms held as intervals, since the numbers
involved (``N(d) <= (3d)^(24d) (50d)^(3d^2)``) overflow any float format.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from ..asymptotics import ShiftRatio
from ..hankel import hermite_hankel_exact
from ..interval import DEFAULT_PREC, IntervalScalar, c_const, euler_e, interval
from .taylor import closed_form_derivative_bound


def _ln(x, prec: int) -> IntervalScalar:
    return interval(x, prec).log()


def _log10(x: IntervalScalar, prec: int) -> IntervalScalar:
    return x / interval(10, prec).log()


@dataclass(frozen=True)
class GeneralBoundReport:
    """Every stated bound for degree ``d``; ``*_log`` fields are natural logs."""

    d: int
    epsilon_log: IntervalScalar
    N_bound_log10: IntervalScalar
    bound_values: dict = field(default_factory=dict)
    chain_log: IntervalScalar | None = None
    chain_ok: bool = False

    @property
    def epsilon_log10(self) -> IntervalScalar:
        return _log10(self.epsilon_log, self.epsilon_log.prec)


def coefficient_count_bound(m: int) -> int:
    """``m! (m-1)^m 2^(m^2 - 2)``."""
    return factorial(m) * (m - 1) ** m * 2 ** (m * m - 2)


def coefficient_count_degree_bound(d: int) -> int:
    """``d^(2d) 2^(d^2)``."""
    return d ** (2 * d) * 2 ** (d * d)


def general_bound_report(d: int, prec: int = DEFAULT_PREC, hermite_limit: int = 10) -> GeneralBoundReport:
    if d < 2:
        raise ValueError("need d >= 2")
    c = c_const(prec)
    e = euler_e(prec)
    ln3d, ln50d = _ln(3 * d, prec), _ln(50 * d, prec)
    target_log = ln3d * (12 * d) + ln50d * Fraction(3 * d * d, 2)
    eps_log = -target_log
    n_log = ln3d * (24 * d) + ln50d * (3 * d * d)

    prod_err_log = (interval(2, prec) * e.sqr()).log() + ln3d * (10 * d - 10) + (c * 4 * d).log() * Fraction(3 * d * d, 2)
    binom_log = e * 4 / c.sqr() * (d * d)
    count_log = _ln(coefficient_count_degree_bound(d), prec)
    chain_log = count_log + binom_log + prod_err_log + eps_log

    # the first inequality of the degree-level derivative bound: e^2 X + 8m 6^(2m) <= 2 e^2 X at m = d
    x_pe = (prod_err_log - (interval(2, prec) * e.sqr()).log()).exp()
    inner_ok = (e.sqr() * x_pe + 8 * d * 6 ** (2 * d) - e.sqr() * x_pe * 2).upper <= 0
    m_each_ok = all(coefficient_count_bound(m) <= coefficient_count_degree_bound(d) for m in range(2, d + 1))

    s_order = 3 * d * (d - 1) // 2 + 1
    eps = eps_log.exp()
    deriv = closed_form_derivative_bound(ShiftRatio(d, prec), s_order, eps)

    hermite = None
    if d <= hermite_limit:
        hermite = {conv: min(hermite_hankel_exact(d, m, conv) for m in range(2, d + 1))
                   for conv in ("monic", "physicists")}

    bound_values = {
        "derivative_bound_log10": _log10(deriv.log(), prec),
        "derivative_order": s_order,
        "product_error_log10": _log10(prod_err_log, prec),
        "binomial_factor_log10": _log10(binom_log, prec),
        "coefficient_count_at_d": coefficient_count_bound(d),
        "coefficient_count_degree_bound": coefficient_count_degree_bound(d),
        "coefficient_count_ok": m_each_ok,
        "product_error_inner_ok": inner_ok,
        "hermite_lower_bound": 1,
        "hermite_min_delta": hermite,
    }
    ok = chain_log.upper < 0 and inner_ok and m_each_ok
    if hermite is not None:
        ok = ok and all(v >= 1 for v in hermite.values())
    return GeneralBoundReport(d, eps_log, _log10(n_log, prec), bound_values, chain_log, ok)


def report_to_json(rep: GeneralBoundReport) -> dict:
    def iv(x: IntervalScalar) -> list[str]:
        return list(x.decimal_strings())

    lv = rep.bound_values
    return {
        "d": rep.d,
        "epsilon_log10": iv(rep.epsilon_log10),
        "N_bound_log10": iv(rep.N_bound_log10),
        "derivative_bound_log10": iv(lv["derivative_bound_log10"]),
        "derivative_order": lv["derivative_order"],
        "product_error_log10": iv(lv["product_error_log10"]),
        "binomial_factor_log10": iv(lv["binomial_factor_log10"]),
        "coefficient_count_at_d": lv["coefficient_count_at_d"],
        "coefficient_count_degree_bound": lv["coefficient_count_degree_bound"],
        "hermite_lower_bound": lv["hermite_lower_bound"],
        "hermite_min_delta": None if lv["hermite_min_delta"] is None else
        {k: str(v) for k, v in lv["hermite_min_delta"].items()},
        "chain_log": iv(rep.chain_log),
        "chain_ok": rep.chain_ok,
    }
