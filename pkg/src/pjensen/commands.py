"""Operations behind the command-line interface, usable directly from Python."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .certifier.certificate import (
    CertificateConfig,
    ChenCertificate,
    HyperbolicityCertificate,
    certify_threshold,
    chen_certificate,
)
from .certifier.general_bound import GeneralBoundReport, general_bound_report
from .exact_core import ExactPoly, JensenSpec, PartitionTable, jensen_coefficients, partition_table
from .exact_core import is_hyperbolic_sturm
from .hankel import is_hyperbolic_hankel
from .interval import interval, pi

METHODS = ("hankel", "sturm", "both")
DEFAULT_EPSILON = {2: Fraction("0.0295"), 3: Fraction("0.021"), 4: Fraction("0.0163"),
                   5: Fraction("0.0081"), 6: Fraction("0.001")}


class CriteriaDisagree(AssertionError):
    pass


@dataclass(frozen=True)
class SweepResult:
    d: int
    n_min: int
    n_max: int
    failures: tuple[int, ...]
    method: str

    def to_json(self) -> dict:
        return {"d": self.d, "n_min": self.n_min, "n_max": self.n_max,
                "failures": list(self.failures), "method": self.method}


def verdict(d: int, n: int, table: PartitionTable, method: str) -> bool:
    coeffs = jensen_coefficients(JensenSpec(d, n), table)
    if method == "hankel":
        return is_hyperbolic_hankel(coeffs)
    if method == "sturm":
        return is_hyperbolic_sturm(ExactPoly(coeffs))
    by_hankel = is_hyperbolic_hankel(coeffs)
    by_sturm = is_hyperbolic_sturm(ExactPoly(coeffs))
    if by_hankel != by_sturm:
        raise CriteriaDisagree(f"Hankel and Sturm criteria disagree at d={d}, n={n}")
    return by_hankel


_worker_table: PartitionTable | None = None


def _init_worker(values: tuple[int, ...]) -> None:
    global _worker_table
    _worker_table = PartitionTable(values)


def _sweep_block(args) -> list[int]:
    d, lo, hi, method = args
    return [n for n in range(lo, hi + 1) if not verdict(d, n, _worker_table, method)]


def _blocks(n_min: int, n_max: int, parts: int) -> list[tuple[int, int]]:
    total = n_max - n_min + 1
    parts = max(1, min(parts, total))
    size, extra = divmod(total, parts)
    out, start = [], n_min
    for i in range(parts):
        end = start + size + (1 if i < extra else 0) - 1
        out.append((start, end))
        start = end + 1
    return out


def cmd_sweep(d: int, n_min: int, n_max: int, method: str = "both", jobs: int | None = None,
              table: PartitionTable | None = None) -> SweepResult:
    """Exact hyperbolicity verdict of ``J^{d,n}`` for every ``n`` in ``[n_min, n_max]``."""
    if not 1 <= d <= 8:
        raise ValueError("sweep supports 1 <= d <= 8")
    if n_min < 0 or n_max < n_min:
        raise ValueError("invalid range: need 0 <= n_min <= n_max")
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    if table is None or table.max_n < n_max + d:
        table = partition_table(n_max + d)
    jobs = jobs or os.cpu_count() or 1
    if jobs == 1 or n_max - n_min < 64:
        failures = [n for n in range(n_min, n_max + 1) if not verdict(d, n, table, method)]
    else:
        tasks = [(d, lo, hi, method) for lo, hi in _blocks(n_min, n_max, jobs)]
        with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(table.values,)) as pool:
            failures = [n for block in pool.map(_sweep_block, tasks) for n in block]
    return SweepResult(d, n_min, n_max, tuple(sorted(failures)), method)


@dataclass(frozen=True)
class NdResult:
    d: int
    N_of_d: int | None
    certificate: HyperbolicityCertificate
    sweep: SweepResult | None

    def to_json(self) -> dict:
        from .certifier.certificate import certificate_to_json

        return {"d": self.d, "N_of_d": self.N_of_d, "certificate": certificate_to_json(self.certificate),
                "sweep": None if self.sweep is None else self.sweep.to_json()}


def default_epsilon(d: int) -> Fraction:
    if d not in DEFAULT_EPSILON:
        raise ValueError(f"no default epsilon for d={d}; pass one explicitly")
    return DEFAULT_EPSILON[d]


def cmd_find_N(d: int, s: int = 10, epsilon=None, jobs: int | None = None, method: str = "both",
               sup_strategy: str = "branch_and_bound", precision: int = 128) -> NdResult:
    """Certify the tail above ``n0`` and sweep ``[1, n0]`` exactly to find ``N(d)``."""
    eps = default_epsilon(d) if epsilon is None else Fraction(epsilon)
    cert = certify_threshold(CertificateConfig(d, eps, s, sup_strategy, precision))
    if not cert.verified:
        return NdResult(d, None, cert, None)
    sweep = cmd_sweep(d, 1, cert.threshold_n0, method, jobs)
    n_of_d = 1 + max(sweep.failures) if sweep.failures else 1
    return NdResult(d, n_of_d, cert, sweep)


# -- the ratio inequality -------------------------------------------------------

@dataclass(frozen=True)
class ChenDirectResult:
    n_min: int
    n_max: int
    failures: tuple[int, ...]


def chen_holds_exact(n: int, table: PartitionTable, prec: int = 128) -> bool:
    """``4(1-u_n)(1-u_{n+1}) < (1 + pi/(sqrt 24 n^(3/2)))(1 - u_n u_{n+1})^2`` decided exactly."""
    if n < 2:
        raise ValueError("the ratio inequality starts at n = 2")
    table.require(n + 2)
    u0 = Fraction(table[n + 1] * table[n - 1], table[n] ** 2)
    u1 = Fraction(table[n + 2] * table[n], table[n + 1] ** 2)
    lhs = 4 * (1 - u0) * (1 - u1)
    sq = (1 - u0 * u1) ** 2
    while True:
        x = pi(prec) / (interval(24, prec).sqrt() * interval(n, prec) ** 3).sqrt()
        if lhs < (1 + x.lower) * sq:
            return True
        if lhs >= (1 + x.upper) * sq:
            return False
        if prec > 4096:
            raise ArithmeticError(f"cannot decide the ratio inequality at n={n}")
        prec *= 2


def chen_direct(n_max: int, n_min: int = 2, table: PartitionTable | None = None) -> ChenDirectResult:
    if n_max < n_min or n_min < 2:
        raise ValueError("need 2 <= n_min <= n_max")
    if table is None or table.max_n < n_max + 2:
        table = partition_table(n_max + 2)
    failures = tuple(n for n in range(n_min, n_max + 1) if not chen_holds_exact(n, table))
    return ChenDirectResult(n_min, n_max, failures)


@dataclass(frozen=True)
class ChenReport:
    direct: ChenDirectResult
    tail: ChenCertificate
    tail_strict: ChenCertificate
    ok: bool = field(default=False)

    def to_json(self) -> dict:
        def tail_json(c: ChenCertificate) -> dict:
            return {"variant": c.variant, "s": c.s, "epsilon": str(c.epsilon),
                    "error_bounds": [{"j": b.j, "bound": str(float(b.bound))} for b in c.taylor_error_bounds],
                    "leading": list(c.leading.decimal_strings()),
                    "value_at_epsilon": list(c.value_at_epsilon.decimal_strings()),
                    "sign_changes": c.sign_changes, "threshold_n0": c.threshold_n0, "verified": c.verified}

        return {"direct": {"n_min": self.direct.n_min, "n_max": self.direct.n_max,
                           "failures": list(self.direct.failures)},
                "tail": tail_json(self.tail), "tail_strict": tail_json(self.tail_strict), "ok": self.ok}


def cmd_chen(n_max_direct: int = 900, s: int = 6, epsilon=Fraction(13, 1000),
             sup_strategy: str = "branch_and_bound") -> ChenReport:
    """Exact check on ``[2, n_max_direct]`` plus tail certificates above the threshold."""
    if n_max_direct < 2:
        raise ValueError("n_max_direct must be at least 2")
    direct = chen_direct(n_max_direct)
    tail = chen_certificate(s, epsilon, "cubic", sup_strategy)
    strict = chen_certificate(s, epsilon, "strict", sup_strategy, error_bounds=tail.taylor_error_bounds)
    covered = n_max_direct >= tail.threshold_n0
    ok = not direct.failures and tail.verified and strict.verified and covered
    return ChenReport(direct, tail, strict, ok)


def cmd_bound(d: int) -> GeneralBoundReport:
    if not 2 <= d <= 100:
        raise ValueError("bound supports 2 <= d <= 100")
    return general_bound_report(d)
