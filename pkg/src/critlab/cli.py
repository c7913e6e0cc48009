"""Command-line entry point: ``critlab <subcommand> ...``.

Exit status is 0 when everything checked passes, 1 when some verdict fails
and 2 for usage errors (bad arguments, malformed labels or files).
"""

from __future__ import annotations

import argparse
import sys

from .bernoulli import bernoulli, dirichlet_L_nonpositive
from .characters import character_from_label, gauss_sum
from .fields import serialize


class UsageError(Exception):
    pass


def _char(label: str):
    try:
        return character_from_label(label)
    except Exception as exc:
        raise UsageError(f"bad character label {label!r}: {exc}") from None


def cmd_bernoulli(args) -> int:
    print(bernoulli(args.m))
    return 0


def cmd_lvalue(args) -> int:
    chi = _char(args.chi)
    if args.m < 1:
        raise UsageError("--m must be positive")
    print(dirichlet_L_nonpositive(args.m, chi))
    return 0


def cmd_gauss_sum(args) -> int:
    print(gauss_sum(_char(args.chi)))
    return 0


def cmd_eigenforms(args) -> int:
    from .qexp import eigenforms
    for f in eigenforms(args.weight, args.prec):
        coeffs = " ".join(str(c) for c in f.coeffs[1:args.prec])
        print(f"{f.label}\tD={f.D}\t{coeffs}")
    return 0


def cmd_anchor(args) -> int:
    from .nearly import anchor_value
    for label, val in anchor_value(args.weight, args.l1, args.l2).items():
        print(f"{label}\t{val}")
    return 0


def cmd_lcrit(args) -> int:
    from .modsym import critical_value, fit_normalization
    from .qexp import eigenforms
    c1, c2 = _char(args.chi1), _char(args.chi2)
    for f in eigenforms(args.weight):
        val = critical_value(f, args.l1, args.l2, c1, c2, fit_normalization(f))
        print(f"{f.label}\t{val}")
    return 0


def cmd_scan(args) -> int:
    from .lab import FAIL, ScanRequest, scan
    from .report import report_emit
    req = ScanRequest(args.weight, args.cond_max, extend_d3=args.extend_d3, workers=args.workers)
    records = scan(req)
    report_emit(records, args.out)
    bad = [r for r in records if FAIL in (r.verdict51, r.verdict54)]
    print(f"{len(records)} records, {len(bad)} failing -> {args.out}")
    for r in bad[:20]:
        print(f"FAIL {r.form} l1={r.l1} l2={r.l2} {r.chi1} {r.chi2} witness={r.witness} {r.error or ''}")
    return 1 if bad else 0


def cmd_siegel_fc(args) -> int:
    from .siegel import fourier_coeff_level1, integrality_validators, psd_corpus
    for B in psd_corpus(args.det_max):
        print(f"{B.serialize()}\t{args.l}\t{serialize(fourier_coeff_level1(B, args.l))}")
    bad = integrality_validators(args.l, args.det_max)
    for item in bad:
        print("FAIL", *item)
    return 1 if bad else 0


def cmd_verify(args) -> int:
    from .lab import FAIL, certificates_for, judge
    from .report import ReportParseError, report_load
    try:
        records = report_load(args.input)
    except (OSError, ReportParseError) as exc:
        raise UsageError(str(exc)) from None
    certs = {}
    status = 0
    for rec in records:
        if rec.k not in certs:
            certs[rec.k] = certificates_for(rec.k)
        stored = (rec.verdict51, rec.verdict54)
        if rec.error is None:
            judge(rec, certs[rec.k][rec.form])
        if (rec.verdict51, rec.verdict54) != stored:
            print(f"MISMATCH {rec.form} l1={rec.l1} l2={rec.l2} {rec.chi1} {rec.chi2}: stored {stored}")
            status = 1
        if FAIL in stored:
            print(f"FAIL {rec.form} l1={rec.l1} l2={rec.l2} {rec.chi1} {rec.chi2} witness={rec.witness}")
            status = 1
    print(f"{len(records)} records checked")
    return status


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="critlab", description="Exact critical L-values and denominator checks.")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("bernoulli", help="Bernoulli number B_m")
    s.add_argument("m", type=int)
    s.set_defaults(func=cmd_bernoulli)

    s = sub.add_parser("lvalue", help="L(1-m, chi)")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--chi", required=True)
    s.set_defaults(func=cmd_lvalue)

    s = sub.add_parser("gauss-sum", help="Gauss sum of a character")
    s.add_argument("--chi", required=True)
    s.set_defaults(func=cmd_gauss_sum)

    s = sub.add_parser("eigenforms", help="q-expansions of the level-one eigenforms")
    s.add_argument("--weight", type=int, required=True)
    s.add_argument("--prec", type=int, default=10)
    s.set_defaults(func=cmd_eigenforms)

    s = sub.add_parser("anchor", help="level-one value by holomorphic projection")
    s.add_argument("--weight", type=int, required=True)
    s.add_argument("--l1", type=int, required=True)
    s.add_argument("--l2", type=int, required=True)
    s.set_defaults(func=cmd_anchor)

    s = sub.add_parser("lcrit", help="twisted value by modular symbols")
    s.add_argument("--weight", type=int, required=True)
    s.add_argument("--l1", type=int, required=True)
    s.add_argument("--l2", type=int, required=True)
    s.add_argument("--chi1", default="1:0")
    s.add_argument("--chi2", default="1:0")
    s.set_defaults(func=cmd_lcrit)

    s = sub.add_parser("scan", help="scan characters and write a report")
    s.add_argument("--weight", type=int, required=True)
    s.add_argument("--cond-max", type=int, required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--extend-d3", action="store_true", help="also scan l1 = l2+1 with trivial characters")
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("siegel-fc", help="degree-2 Eisenstein coefficients and integrality check")
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--det-max", type=int, required=True)
    s.set_defaults(func=cmd_siegel_fc)

    s = sub.add_parser("verify", help="re-derive verdicts of a saved report")
    s.add_argument("--in", dest="input", required=True)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"critlab: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError) as exc:
        # precondition violations (unsupported weight, excluded tuple) are usage errors
        print(f"critlab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
