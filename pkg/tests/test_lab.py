from __future__ import annotations

from fractions import Fraction

import pytest

from critlab.cli import main
from critlab.fields import PrimeIdeal, PrimeValuationMap, denominator_support, primes_above
from critlab.lab import (FAIL, NA, PASS, CriticalValueRecord, ScanRequest, certificates_for, find_q0,
                         finite_set_witness, judge, max_valuations, residue, scan, verify_thm51, verify_thm54)
from critlab.qexp import eigenforms
from critlab.report import ReportParseError, format_record, parse_record, report_emit, report_load, value_equal


@pytest.fixture(scope="module")
def scan12():
    return scan(ScanRequest(12, 4))


@pytest.fixture(scope="module")
def cert12():
    return certificates_for(12)["12.0"]


def _synthetic(primes, chi1="1:0", chi2="1:0", l1=11, l2=8):
    denom = PrimeValuationMap({PrimeIdeal(p): -1 for p in primes})
    return CriticalValueRecord(12, "12.0", l1, l2, chi1, chi2, Fraction(1, 1), (1, 1), denom)


def test_scan_trivial_characters():
    recs = scan(ScanRequest(12, 1))
    pairs = [(r.l1, r.l2) for r in recs]
    assert len(recs) == 10
    assert pairs == sorted(pairs)
    for l1, l2 in pairs:
        assert (l1 + l2) % 2 == 1 and l1 >= l2 + 2 and 13 - l1 <= l2
    assert all(r.verdict51 == PASS and r.verdict54 == PASS for r in recs)


def test_scan_small_conductors(scan12):
    assert any(r.l1 == r.l2 + 1 for r in scan12)
    assert all(r.chi1 != "1:0" or r.chi2 != "1:0" for r in scan12 if r.l1 == r.l2 + 1)
    assert all(r.error is None for r in scan12)
    assert all(PASS == r.verdict51 == r.verdict54 for r in scan12)
    assert [r.key for r in scan12] == sorted(r.key for r in scan12)


def test_extended_scan_marks_coarse_bound_not_applicable():
    recs = scan(ScanRequest(12, 1, extend_d3=True))
    extra = [r for r in recs if r.l1 == r.l2 + 1]
    assert extra and all(r.verdict51 == NA and r.verdict54 == PASS for r in extra)


def test_empty_pair_list():
    assert scan(ScanRequest(12, 8, pairs=())) == []


def test_verdict_examples(cert12):
    assert verify_thm51(_synthetic([691]), cert12) == (PASS, None)
    assert verify_thm51(_synthetic([101]), cert12) == (FAIL, 101)
    assert verify_thm54(_synthetic([101]), cert12) == (FAIL, 101)
    assert verify_thm51(_synthetic([]), cert12) == (PASS, None)
    # conductor primes are exempt, as is 2
    assert verify_thm54(_synthetic([101], chi1="101:1"), cert12) == (PASS, None)
    assert verify_thm51(_synthetic([2]), cert12) == (PASS, None)
    # 13 is allowed by the coarse set (zeta(-11) denominator) but not the refined one
    assert verify_thm51(_synthetic([13]), cert12) == (PASS, None)
    assert verify_thm54(_synthetic([13]), cert12) == (FAIL, 13)


def test_certificates():
    c12 = certificates_for(12)["12.0"]
    assert c12.zeta_numerator_primes == {691}
    assert c12.refined == {3, 5, 7, 11, 691}
    assert c12.coarse == {3, 5, 7, 11, 13, 691}
    for f in eigenforms(24):
        c = certificates_for(24)[f.label]
        assert 144169 in c.refined and 144169 in c.coarse
        assert c.refined <= c.coarse


def test_verdicts_rederive_from_stored_map(scan12, cert12):
    for rec in scan12:
        stored = (rec.verdict51, rec.verdict54, rec.witness)
        judge(rec, cert12)
        assert (rec.verdict51, rec.verdict54, rec.witness) == stored
        assert rec.denominator == denominator_support(rec.value)


def test_finite_set_witness(scan12):
    certs = certificates_for(12)
    seen, ok = finite_set_witness(scan12, certs)
    assert ok and seen <= certs["12.0"].coarse
    mv = max_valuations(scan12)
    assert all(v > 0 for v in mv.values())


def test_find_q0():
    (d,) = eigenforms(12, 60)
    res = find_q0(d, 5, 691, 50)
    assert res.found and res.q0 <= 50 and res.residue != 0
    # the factor is a unit exactly when the scaled form reduces to nonzero
    q = res.q0
    x = Fraction(q) ** 4 - d.a(q) + Fraction(q) ** 7
    assert x.numerator % 691 != 0
    assert not find_q0(d, 5, 691, 1).found
    with pytest.raises(ValueError):
        find_q0(d, 5, 11, 50)


def test_find_q0_quadratic_field():
    f = eigenforms(24, 60)[0]
    for P in primes_above(144169, f.D):
        res = find_q0(f, 11, P, 50)
        assert res.found
    P = primes_above(31, f.D)[0]
    assert residue(Fraction(62, 3), P) == 0


def test_report_round_trip(tmp_path, scan12):
    assert len(scan12) >= 100
    path = tmp_path / "r.tsv"
    report_emit(list(reversed(scan12)), path)
    back = report_load(path)
    assert [r.key for r in back] == [r.key for r in scan12]
    for a, b in zip(scan12, back):
        assert value_equal(a.value, b.value)
        assert a.denominator == b.denominator
        assert (a.verdict51, a.verdict54, a.witness, a.error) == (b.verdict51, b.verdict54, b.witness, b.error)
        assert format_record(a) == format_record(b)


def test_report_errors(tmp_path, scan12):
    path = tmp_path / "r.tsv"
    report_emit(scan12[:3], path)
    text = path.read_text()
    path.write_text(text[:-1])
    with pytest.raises(ReportParseError) as exc:
        report_load(path)
    assert exc.value.lineno == 3
    lines = text.split("\n")
    lines[1] = lines[1].replace("\t", " ", 1)
    path.write_text("\n".join(lines))
    with pytest.raises(ReportParseError) as exc:
        report_load(path)
    assert exc.value.lineno == 2
    with pytest.raises(ReportParseError):
        parse_record("critlab-report/0" + text.split("\n")[0][len("critlab-report/1"):], 1)


def test_scan_is_deterministic(tmp_path):
    req = ScanRequest(16, 3)
    a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
    report_emit(scan(req), a)
    report_emit(scan(req), b)
    assert a.read_bytes() == b.read_bytes()


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["bernoulli", "12"]) == 0
    assert capsys.readouterr().out.strip() == "-691/2730"
    assert main(["lvalue", "--m", "1", "--chi", "4:1"]) == 0
    assert main(["gauss-sum", "--chi", "3:1"]) == 0
    assert main(["lvalue", "--m", "1", "--chi", "4:9"]) == 2
    assert main(["gauss-sum", "--chi", "6:1"]) == 2
    assert main(["anchor", "--weight", "12", "--l1", "11", "--l2", "9"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["scan", "--weight", "12"])
    assert exc.value.code == 2
    out = tmp_path / "s.tsv"
    assert main(["scan", "--weight", "12", "--cond-max", "3", "--out", str(out)]) == 0
    assert main(["verify", "--in", str(out)]) == 0
    # a tampered verdict is caught
    lines = out.read_text().split("\n")
    parts = lines[0].split("\t")
    parts[13] = FAIL
    lines[0] = "\t".join(parts)
    bad = tmp_path / "bad.tsv"
    bad.write_text("\n".join(lines))
    assert main(["verify", "--in", str(bad)]) == 1
    assert main(["verify", "--in", str(tmp_path / "missing.tsv")]) == 2
    assert main(["siegel-fc", "--l", "4", "--det-max", "12"]) == 0
    capsys.readouterr()
