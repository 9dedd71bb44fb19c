"""``pjensen`` command-line entry point."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import commands
from .certifier.certificate import (
    CertificateConfig,
    CertificateFormatError,
    certificate_summary,
    certificate_to_json,
    certify_threshold,
    verify_certificate_document,
)
from .certifier.general_bound import report_to_json
from .exact_core import JensenSpec, jensen_poly, partition_table, is_hyperbolic_sturm

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BAD_JSON = 2
EXIT_SCHEMA = 3
EXIT_INVARIANT = 4

SUP_CHOICES = {"bnb": "branch_and_bound", "closed-form": "closed_form"}


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a decimal or rational number: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _write_json(doc: dict, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")


def _add_cert_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--s", type=int, default=10, help="Taylor order (default 10)")
    p.add_argument("--epsilon", type=_fraction, default=None,
                   help="upper end of the w-interval; defaults exist for d = 2..6")
    p.add_argument("--precision", type=int, default=128, help="working precision in bits")
    p.add_argument("--sup", choices=sorted(SUP_CHOICES), default="bnb",
                   help="derivative bound: interval branch and bound or the closed form")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pjensen", description="Hyperbolicity of partition Jensen polynomials.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="exact hyperbolicity check on a range of shifts")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--from", dest="n_min", type=int, required=True)
    p.add_argument("--to", dest="n_max", type=int, required=True)
    p.add_argument("--method", choices=commands.METHODS, default="both")
    p.add_argument("--jobs", type=int, default=os.cpu_count())
    p.add_argument("--out")

    p = sub.add_parser("find-n", help="certify a tail and sweep below it to find N(d)")
    p.add_argument("--d", type=int, required=True)
    _add_cert_options(p)
    p.add_argument("--method", choices=commands.METHODS, default="both")
    p.add_argument("--jobs", type=int, default=os.cpu_count())
    p.add_argument("--out")

    p = sub.add_parser("certify", help="emit a threshold certificate")
    p.add_argument("--d", type=int, required=True)
    _add_cert_options(p)
    p.add_argument("--out")

    p = sub.add_parser("check-cert", help="re-verify a certificate file")
    p.add_argument("path")

    p = sub.add_parser("chen", help="the ratio inequality for u_n = p(n+1)p(n-1)/p(n)^2")
    p.add_argument("--to", dest="n_max", type=int, default=900, help="end of the exact range")
    p.add_argument("--s", type=int, default=6)
    p.add_argument("--epsilon", type=_fraction, default=Fraction(13, 1000))
    p.add_argument("--sup", choices=sorted(SUP_CHOICES), default="bnb")
    p.add_argument("--out")

    p = sub.add_parser("bound", help="explicit general-degree bound chain")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--out")

    p = sub.add_parser("partition", help="print p(n)")
    p.add_argument("n", type=int)

    p = sub.add_parser("jensen", help="print J^{d,n} and its verdict")
    p.add_argument("d", type=int)
    p.add_argument("n", type=int)
    return parser


def _run_sweep(args) -> int:
    res = commands.cmd_sweep(args.d, args.n_min, args.n_max, args.method, args.jobs)
    print(f"d={res.d} range=[{res.n_min}, {res.n_max}] method={res.method} failures={list(res.failures)}")
    _write_json(res.to_json(), args.out)
    return EXIT_FAILED if res.failures else EXIT_OK


def _run_find_n(args) -> int:
    res = commands.cmd_find_N(args.d, args.s, args.epsilon, args.jobs, args.method, SUP_CHOICES[args.sup],
                              args.precision)
    print(certificate_summary(res.certificate))
    _write_json(res.to_json(), args.out)
    if res.N_of_d is None:
        for line in res.certificate.diagnostics:
            print(line, file=sys.stderr)
        print("certification failed: choose smaller epsilon", file=sys.stderr)
        return EXIT_FAILED
    last = max(res.sweep.failures) if res.sweep.failures else None
    print(f"sweep [1, {res.certificate.threshold_n0}]: last failure {last}")
    print(f"N({args.d}) = {res.N_of_d}")
    return EXIT_OK


def _run_certify(args) -> int:
    eps = args.epsilon if args.epsilon is not None else commands.default_epsilon(args.d)
    cert = certify_threshold(CertificateConfig(args.d, eps, args.s, SUP_CHOICES[args.sup], args.precision))
    print(certificate_summary(cert))
    _write_json(certificate_to_json(cert), args.out)
    return EXIT_OK if cert.verified else EXIT_FAILED


def check_certificate_file(path: str) -> tuple[int, list[str]]:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        return EXIT_BAD_JSON, [f"cannot parse {path}: {exc}"]
    if isinstance(doc, dict) and "schema_version" not in doc and isinstance(doc.get("certificate"), dict):
        doc = doc["certificate"]  # output of find-n wraps the certificate
    try:
        problems = verify_certificate_document(doc)
    except CertificateFormatError as exc:
        return EXIT_SCHEMA, [str(exc)]
    return (EXIT_INVARIANT if problems else EXIT_OK), problems


def _run_check_cert(args) -> int:
    code, messages = check_certificate_file(args.path)
    for line in messages:
        print(line, file=sys.stderr)
    if code == EXIT_OK:
        print(f"{args.path}: valid")
    return code


def _run_chen(args) -> int:
    rep = commands.cmd_chen(args.n_max, args.s, args.epsilon, SUP_CHOICES[args.sup])
    d = rep.direct
    print(f"exact check n in [{d.n_min}, {d.n_max}]: failures={list(d.failures)}")
    for tail in (rep.tail, rep.tail_strict):
        print(f"tail ({tail.variant}): leading={float(tail.leading.lower):.6f} "
              f"value(eps)={float(tail.value_at_epsilon.lower):.6g} verified={tail.verified} "
              f"for n > {tail.threshold_n0}")
    _write_json(rep.to_json(), args.out)
    return EXIT_OK if rep.ok else EXIT_FAILED


def _run_bound(args) -> int:
    rep = commands.cmd_bound(args.d)
    doc = report_to_json(rep)
    print(f"d={rep.d} log10 N bound={float(rep.N_bound_log10.lower):.4f} "
          f"log10 eps={float(rep.epsilon_log10.lower):.4f} chain_ok={rep.chain_ok}")
    print(f"hermite lower bound={doc['hermite_lower_bound']}")
    _write_json(doc, args.out)
    return EXIT_OK if rep.chain_ok else EXIT_FAILED


def _run_partition(args) -> int:
    print(partition_table(args.n)[args.n])
    return EXIT_OK


def _run_jensen(args) -> int:
    spec = JensenSpec(args.d, args.n)
    poly = jensen_poly(spec, partition_table(args.n + args.d))
    print(" + ".join(f"{c}*X^{i}" for i, c in enumerate(poly.coeffs)))
    print("hyperbolic" if is_hyperbolic_sturm(poly) else "not hyperbolic")
    return EXIT_OK


HANDLERS = {
    "sweep": _run_sweep, "find-n": _run_find_n, "certify": _run_certify, "check-cert": _run_check_cert,
    "chen": _run_chen, "bound": _run_bound, "partition": _run_partition, "jensen": _run_jensen,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return HANDLERS[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
