"""Acceptance criteria 1 to 9, one PASS/FAIL line each.

The lines are printed (visible with ``-s``) and repeated in the terminal
summary under "acceptance criteria".
"""

from __future__ import annotations

import json
import time
from fractions import Fraction

import pytest

from conftest import record_acceptance, shared_table, timed_find_n
from pjensen import cli, commands
from pjensen.asymptotics import R_of, ShiftRatio, ratio_error_bound, w_of
from pjensen.certifier.certificate import (
    CertificateConfig,
    expand_D_with_errors,
    k_of,
    leading_term_expected,
)
from pjensen.certifier.taylor import sup_abs_derivative, taylor_polynomial_value
from pjensen.hankel import hermite_discriminant_closed_form, hermite_hankel_exact
from pjensen.interval import DomainError, c_const

# Maxima of |R^(10)(j, w)| / 10! over [0, eps_d] for d = 2..5, j = 1..d.
REFERENCE_FIRST_SUMMANDS = {
    2: {1: 12719.9, 2: 328255},
    3: {1: 10559.2, 2: 328255, 3: 3.77919e6},
    4: {1: 9026.37, 2: 328255, 3: 3.77919e6, 4: 1.75707e7},
    5: {1: 5893.44, 2: 328255, 3: 3.77919e6, 4: 1.75708e7, 5: 5.37043e7},
}
EXPECTED_N = {2: 25, 3: 94, 4: 206, 5: 381}
EXPECTED_N0 = {2: 174, 3: 344, 4: 572, 5: 2316}


def check(number: int, title: str, ok: bool, detail: str = "") -> None:
    record_acceptance(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else ""))
    assert ok, f"criterion {number} failed: {detail}"


def test_criterion_1_n2(tmp_path):
    out = tmp_path / "n2.json"
    start = time.perf_counter()
    code = cli.main(["find-n", "--d", "2", "--epsilon", "0.0295", "--jobs", "1", "--out", str(out)])
    elapsed = time.perf_counter() - start
    doc = json.loads(out.read_text())
    last_failure = max(doc["sweep"]["failures"])
    n0 = doc["certificate"]["threshold_n0"]
    ok = code == 0 and doc["N_of_d"] == 25 and last_failure == 24 and n0 == 174 and elapsed < 10
    check(1, "N(2) = 25", ok, f"N={doc['N_of_d']} last failure={last_failure} n0={n0} runtime={elapsed:.1f}s < 10s")


def test_criterion_2_n3_n4_n5():
    details, ok, total = [], True, 0.0
    for d in (3, 4, 5):
        res, elapsed = timed_find_n(d)
        total += elapsed
        good = res.N_of_d == EXPECTED_N[d] and res.certificate.threshold_n0 == EXPECTED_N0[d]
        good = good and res.certificate.config.s == 10
        ok = ok and good
        details.append(f"N({d})={res.N_of_d} n0={res.certificate.threshold_n0}")
    ok = ok and total < 30 * 60
    check(2, "N(3), N(4), N(5) with thresholds", ok, ", ".join(details) + f", runtime={total:.1f}s < 1800s")


def test_criterion_3_first_summands():
    worst, ok, count = 0.0, True, 0
    for d, ref in REFERENCE_FIRST_SUMMANDS.items():
        res, _ = timed_find_n(d)
        for j, value in ref.items():
            ours = float(res.certificate.taylor_error_bounds[j - 1].first.value.upper)
            assert res.certificate.taylor_error_bounds[j - 1].j == j
            ratio = ours / value
            worst = max(worst, ratio)
            ok = ok and 1.0 <= ratio <= 1.1
            count += 1
    check(3, "first Taylor summands within [1, 1.1] x reference", ok, f"{count} entries, worst ratio {worst:.5f}")


def test_criteria_4_5_leading_term_and_cancellation():
    lead_ok, cancel_ok = True, True
    worst_width, monic_ratio_ok, checked = 0.0, True, 0
    for d in range(2, 6):
        cfg = CertificateConfig(d, commands.default_epsilon(d))
        bounds = {j: Fraction(0) for j in range(1, d + 1)}
        for m in range(2, d + 1):
            poly, _ = expand_D_with_errors(cfg, m, bounds)
            k = k_of(m)
            c0 = poly.pure[k]
            expected = leading_term_expected(d, m)
            worst_width = max(worst_width, c0.rel_width())
            lead_ok = lead_ok and c0.intersects(expected) and c0.rel_width() < 1e-6
            monic = hermite_hankel_exact(d, m, "monic")
            physicists = hermite_hankel_exact(d, m, "physicists")
            monic_ratio_ok = monic_ratio_ok and monic == physicists * 2 ** (m * (m - 1))
            for i in range(k):
                if i in poly.pure:
                    cancel_ok = cancel_ok and poly.pure[i].contains_zero()
                for alpha, e in poly.errors_at(i).items():
                    cancel_ok = cancel_ok and e.contains_zero()
            checked += 1
    # the literal monic constant is off by exactly 2^(m(m-1)); see the decisions ledger
    check(4, "c_0 encloses (c/sqrt2)^(m(m-1)) Delta_m(H_d), leading coefficient 2^d convention",
          lead_ok and monic_ratio_ok,
          f"{checked} minors, max rel width {worst_width:.2e} < 1e-6, monic/physicists = 2^(m(m-1)) exactly")
    check(5, "coefficients of w^i, i < 3m(m-1)/2, contain 0", cancel_ok, f"{checked} minors, d <= 5")


def test_criterion_6_ratio_inequality(tmp_path):
    out = tmp_path / "chen.json"
    start = time.perf_counter()
    code = cli.main(["chen", "--out", str(out)])
    elapsed = time.perf_counter() - start
    doc = json.loads(out.read_text())
    lo, hi = (Fraction(x) for x in doc["tail"]["leading"])
    prec = 256
    expected = c_const(prec) ** 6 * Fraction(25, 64)  # 25 pi^12 / 729
    encloses = lo <= expected.upper and expected.lower <= hi
    direct = doc["direct"]
    ok = (code == 0 and direct["n_min"] == 2 and direct["n_max"] == 900 and not direct["failures"]
          and encloses and doc["tail"]["verified"] and elapsed < 120)
    check(6, "ratio inequality: exact 2..900, tail certificate, exit 0", ok,
          f"leading in [{float(lo):.4f}, {float(hi):.4f}] vs 25pi^12/729={float(expected):.4f}, "
          f"tail n0={doc['tail']['threshold_n0']}, runtime={elapsed:.1f}s < 120s")


def test_criterion_7_hermite_values():
    ok = all(hermite_hankel_exact(d, m, conv) >= 1
             for d in range(2, 11) for m in range(2, d + 1) for conv in ("monic", "physicists"))
    ok = ok and hermite_hankel_exact(2, 2, "monic") == 8
    closed = all(hermite_hankel_exact(d, d, "physicists") == hermite_discriminant_closed_form(d)
                 for d in range(2, 9))
    check(7, "Hermite Hankel values", ok and closed,
          "Delta_m(H_d) >= 1 for 2 <= m <= d <= 10 both conventions, Delta_2(H_2)=8 monic, closed form d <= 8")


def test_criterion_8_bound_chain(tmp_path):
    results = {}
    for d in range(2, 11):
        out = tmp_path / f"bound{d}.json"
        code = cli.main(["bound", "--d", str(d), "--out", str(out)])
        doc = json.loads(out.read_text())
        results[d] = code == 0 and doc["chain_ok"] is True and Fraction(doc["chain_log"][1]) < 0
    check(8, "bound chain_ok for d = 2..10", all(results.values()),
          "failing d: " + str([d for d, v in results.items() if not v]))


def _ratio_containment_violations() -> tuple[int, int]:
    table = shared_table()
    violations = checked = 0
    for j in range(-1, 6):
        sr = ShiftRatio(j)
        for n in range(1, 2001):
            if n + j < 0:
                continue
            w = w_of(n)
            try:
                err = ratio_error_bound(sr, w)
            except DomainError:
                continue  # L(w) >= 1: the bound does not apply
            r = R_of(sr, w)
            exact = Fraction(table[n + j], table[n])
            checked += 1
            if not ((r - err).lower <= exact <= (r + err).upper):
                violations += 1
    return violations, checked


def _taylor_remainder_violations() -> tuple[int, int]:
    eps = Fraction("0.0295")
    violations = checked = 0
    for j in range(1, 6):
        sr = ShiftRatio(j)
        for s in (6, 10):
            sup = sup_abs_derivative(sr, s, eps).value.upper
            for i in range(1, 51):
                w = eps * i / 50
                diff = R_of(sr, w) - taylor_polynomial_value(sr, s, w)
                checked += 1
                if abs(diff).lower > sup * w**s:
                    violations += 1
    return violations, checked


def test_criterion_9_property_suites():
    start = time.perf_counter()
    disagreements = 0
    for d in range(1, 6):
        try:
            commands.cmd_sweep(d, 0, 3000, "both", jobs=1, table=shared_table())
        except commands.CriteriaDisagree:
            disagreements += 1
    ratio_bad, ratio_n = _ratio_containment_violations()
    taylor_bad, taylor_n = _taylor_remainder_violations()
    elapsed = time.perf_counter() - start
    ok = disagreements == 0 and ratio_bad == 0 and taylor_bad == 0
    check(9, "property suites", ok,
          f"Hankel/Sturm disagreements={disagreements} (d <= 5, n <= 3000); "
          f"ratio containment violations={ratio_bad}/{ratio_n}; "
          f"Taylor remainder violations={taylor_bad}/{taylor_n}; runtime={elapsed:.1f}s")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-s", "-q"]))
