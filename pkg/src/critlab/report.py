"""Tab-separated scan reports that load back to identical records.

Each line holds one record.  Field order:

    version k form l1 l2 chi1 chi2 N D c0 c1 denominator verdict51 verdict54 witness error

c0 and c1 are JSON arrays of "num/den" strings (coordinates of the value in
Q(zeta_N, sqrt D)), the denominator is a JSON array of [p, tag, exponent]
triples and an empty error is written as "-".  Timings are not written, so
two runs of the same scan give byte-identical files.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .fields import (CompositeNumber, PrimeIdeal, PrimeValuationMap, format_rational, parse_rational,
                     simplify)
from .lab import CriticalValueRecord

VERSION = "critlab-report/1"
N_FIELDS = 16


class ReportParseError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def _coords(value) -> tuple[int, int, list[str], list[str]]:
    if value is None:
        return 1, 1, [], []
    if isinstance(value, CompositeNumber):
        return value.N, value.D, [format_rational(c) for c in value.c0], [format_rational(c) for c in value.c1]
    return 1, 1, [format_rational(value)], []


def _prime_from(p: int, label: str, D: int) -> PrimeIdeal:
    if label.startswith("split:"):
        return PrimeIdeal(p, D, "split", int(label.split(":")[1]))
    if label == "rational":
        return PrimeIdeal(p)
    return PrimeIdeal(p, D, label)


def format_record(rec: CriticalValueRecord) -> str:
    N, D, c0, c1 = _coords(rec.value)
    fields = [
        VERSION, str(rec.k), rec.form, str(rec.l1), str(rec.l2), rec.chi1, rec.chi2,
        str(N), str(D), json.dumps(c0), json.dumps(c1),
        json.dumps(rec.denominator.triples()),
        rec.verdict51, rec.verdict54,
        "-" if rec.witness is None else str(rec.witness),
        "-" if rec.error is None else rec.error.replace("\t", " ").replace("\n", " "),
    ]
    return "\t".join(fields)


def parse_record(line: str, lineno: int = 0) -> CriticalValueRecord:
    parts = line.split("\t")
    if len(parts) != N_FIELDS:
        raise ReportParseError(lineno, f"expected {N_FIELDS} fields, found {len(parts)}")
    if parts[0] != VERSION:
        raise ReportParseError(lineno, f"unknown schema version {parts[0]!r}")
    try:
        k, l1, l2, N, D = int(parts[1]), int(parts[3]), int(parts[4]), int(parts[7]), int(parts[8])
        c0 = [parse_rational(s) for s in json.loads(parts[9])]
        c1 = [parse_rational(s) for s in json.loads(parts[10])]
        triples = json.loads(parts[11])
        denom = PrimeValuationMap({_prime_from(int(p), str(tag), D): int(e) for p, tag, e in triples})
    except (ValueError, TypeError) as exc:
        raise ReportParseError(lineno, str(exc)) from None
    if not c0:
        value = None
    elif N == 1 and D == 1:
        value = c0[0]
    else:
        value = simplify(CompositeNumber(N, D, c0, c1 or None))
    rec = CriticalValueRecord(k, parts[2], l1, l2, parts[5], parts[6], value, (N, D), denom,
                              parts[12], parts[13],
                              None if parts[14] == "-" else int(parts[14]),
                              None if parts[15] == "-" else parts[15])
    return rec


def report_emit(records, path) -> None:
    """Write records in scan order, whatever order they arrive in."""
    ordered = sorted(records, key=lambda r: r.key)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in ordered:
            fh.write(format_record(rec) + "\n")


def report_load(path) -> list[CriticalValueRecord]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if not text:
        return []
    lines = text.split("\n")
    if lines[-1] != "":
        raise ReportParseError(len(lines), "truncated final line (no newline)")
    out = []
    for i, line in enumerate(lines[:-1], start=1):
        out.append(parse_record(line, i))
    return out


def value_equal(a, b) -> bool:
    if a is None or b is None:
        return a is b
    return simplify(a - b) == 0 if isinstance(a, CompositeNumber) or isinstance(b, CompositeNumber) \
        else Fraction(a) == Fraction(b)
