"""Scanning critical values over characters and checking their denominators.

A scan walks every admissible (l1, l2, chi1, chi2) for each eigenform of a
weight, computes the exact value, pushes it down to Q(f) by the relative
norm and factors the denominator.  Two verdicts are attached: the coarse
bound built from zeta(1-k), (k!)^2 and the congruence ideal, and the refined
rule that only excludes primes above k.  The prime 2 is ignored throughout.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import factorint, primerange

from .bernoulli import zeta_nonpositive
from .characters import DirichletCharacter, character_from_label, primitive_characters
from .fields import (AnyNumber, CompositeNumber, PrimeIdeal, PrimeValuationMap, QuadraticNumber,
                     denominator_support, primes_above, simplify)
from .modsym import PeriodNormalization, critical_value, fit_normalization
from .qexp import ConditionError, Eigenform, check_conditions, congruence_ideal, eigenforms

PASS, FAIL, NA = "PASS", "FAIL", "N/A"


@dataclass(frozen=True)
class ScanRequest:
    """``pairs`` of None means every (l1, l2) allowed by the weight.

    With ``extend_d3`` the pairs l1 = l2 + 1 with both characters trivial are
    scanned too; only the refined verdict applies to them.
    """

    weight: int
    cond_max: int
    pairs: tuple[tuple[int, int], ...] | None = None
    extend_d3: bool = False
    workers: int = 1
    congruence_bound: int = 10


@dataclass
class CriticalValueRecord:
    k: int
    form: str
    l1: int
    l2: int
    chi1: str
    chi2: str
    value: AnyNumber = None
    number_field: tuple[int, int] = (1, 1)
    denominator: PrimeValuationMap = field(default_factory=PrimeValuationMap)
    verdict51: str = NA
    verdict54: str = NA
    witness: int | None = None
    error: str | None = None
    seconds: float = 0.0

    @property
    def key(self) -> tuple:
        return (self.l1, self.l2, _label_key(self.chi1), _label_key(self.chi2), self.form)

    @property
    def conductor_product(self) -> int:
        return int(self.chi1.split(":")[0]) * int(self.chi2.split(":")[0])

    @property
    def in_d3(self) -> bool:
        trivial = self.chi1 == "1:0" and self.chi2 == "1:0"
        return self.l1 >= self.l2 + 2 or (self.l1 == self.l2 + 1 and not trivial)


def _label_key(label: str) -> tuple[int, int]:
    N, j = label.split(":")
    return int(N), int(j)


@dataclass
class BoundCertificate:
    k: int
    form: str
    zeta_numerator_primes: frozenset
    congruence_norm_primes: frozenset
    coarse: frozenset
    refined: frozenset

    def refined_allows(self, p: int) -> bool:
        return p <= self.k or p in self.zeta_numerator_primes or p in self.congruence_norm_primes


def certificate(f: Eigenform, congruence_bound: int = 10) -> BoundCertificate:
    """Odd primes allowed in denominators for the eigenform f."""
    k = f.weight
    z = zeta_nonpositive(k)
    cong = congruence_ideal(f, congruence_bound)
    cong_primes = frozenset(cong.norm_primes())
    zeta_num = frozenset(factorint(abs(z.numerator)))
    zeta_den = frozenset(factorint(z.denominator))
    small = frozenset(primerange(2, k + 1))
    coarse = frozenset(p for p in zeta_num | zeta_den | small | cong_primes if p != 2)
    refined = frozenset(p for p in small | zeta_num | cong_primes if p != 2)
    return BoundCertificate(k, f.label, zeta_num, cong_primes, coarse, refined)


def admissible_pairs(k: int) -> list[tuple[int, int]]:
    """(l1, l2) with k-l1+1 <= l2 <= l1-1 <= k-2; parity and D3 are filtered per character pair."""
    return [(l1, l2) for l1 in range(2, k) for l2 in range(k - l1 + 1, l1)]


def _tuples(req: ScanRequest) -> list[tuple[int, int, DirichletCharacter, DirichletCharacter]]:
    chars = primitive_characters(req.cond_max)
    chars.sort(key=lambda c: _label_key(c.label))
    pairs = list(req.pairs) if req.pairs is not None else admissible_pairs(req.weight)
    out = []
    for l1, l2 in sorted(pairs):
        for c1 in chars:
            for c2 in chars:
                try:
                    check_conditions(req.weight, l1, l2, c1, c2, require_d3=True)
                except ConditionError as exc:
                    trivial = c1.is_trivial() and c2.is_trivial()
                    if not (req.extend_d3 and exc.clause == "D3" and trivial):
                        continue
                out.append((l1, l2, c1, c2))
    return out


def _one_record(f: Eigenform, norm: PeriodNormalization, cert: BoundCertificate,
                l1: int, l2: int, c1: DirichletCharacter, c2: DirichletCharacter) -> CriticalValueRecord:
    rec = CriticalValueRecord(f.weight, f.label, l1, l2, c1.label, c2.label)
    t0 = time.perf_counter()
    try:
        val = critical_value(f, l1, l2, c1, c2, norm, enforce_d3=rec.in_d3)
        rec.value = val
        rec.number_field = val.field if isinstance(val, CompositeNumber) else (1, 1)
        rec.denominator = denominator_support(val)
        judge(rec, cert)
    except Exception as exc:  # recorded inline; the stream goes on
        rec.error = f"{type(exc).__name__}: {exc}"
        rec.verdict51 = rec.verdict54 = FAIL
    rec.seconds = time.perf_counter() - t0
    return rec


def judge(rec: CriticalValueRecord, cert: BoundCertificate) -> CriticalValueRecord:
    v51 = verify_thm51(rec, cert) if rec.in_d3 else (NA, None)
    v54 = verify_thm54(rec, cert)
    rec.verdict51 = v51[0]
    rec.verdict54 = v54[0]
    rec.witness = v51[1] if v51[1] is not None else v54[1]
    return rec


def verify_thm51(rec: CriticalValueRecord, cert: BoundCertificate) -> tuple[str, int | None]:
    """PASS unless an odd denominator prime avoids N1 N2 and the coarse set."""
    NN = rec.conductor_product
    for p in sorted(rec.denominator.rational_primes()):
        if p == 2 or NN % p == 0 or p in cert.coarse:
            continue
        return FAIL, p
    return PASS, None


def verify_thm54(rec: CriticalValueRecord, cert: BoundCertificate) -> tuple[str, int | None]:
    """PASS unless a denominator prime exceeds k and divides none of N1 N2, Norm D_f, num zeta(1-k)."""
    NN = rec.conductor_product
    for p in sorted(rec.denominator.rational_primes()):
        if NN % p == 0 or cert.refined_allows(p):
            continue
        return FAIL, p
    return PASS, None


_WORKER_STATE: dict = {}


def _prepare(k: int, congruence_bound: int):
    if k not in _WORKER_STATE:
        forms = eigenforms(k)
        _WORKER_STATE[k] = [(f, fit_normalization(f), certificate(f, congruence_bound)) for f in forms]
    return _WORKER_STATE[k]


def _run_chunk(args):
    k, cb, chunk = args
    prepared = _prepare(k, cb)
    out = []
    for l1, l2, lab1, lab2 in chunk:
        c1, c2 = character_from_label(lab1), character_from_label(lab2)
        for f, norm, cert in prepared:
            out.append(_one_record(f, norm, cert, l1, l2, c1, c2))
    return out


def scan(req: ScanRequest) -> list[CriticalValueRecord]:
    """All records of the request, ordered by (l1, l2, chi1, chi2, form)."""
    tuples = _tuples(req)
    if not tuples:
        return []
    work = [(l1, l2, c1.label, c2.label) for l1, l2, c1, c2 in tuples]
    if req.workers <= 1:
        records = _run_chunk((req.weight, req.congruence_bound, work))
    else:
        size = max(1, math.ceil(len(work) / (4 * req.workers)))
        chunks = [(req.weight, req.congruence_bound, work[i:i + size]) for i in range(0, len(work), size)]
        records = []
        with ProcessPoolExecutor(req.workers) as ex:
            for part in ex.map(_run_chunk, chunks):
                records.extend(part)
    records.sort(key=lambda r: r.key)
    return records


def certificates_for(k: int, congruence_bound: int = 10) -> dict[str, BoundCertificate]:
    return {f.label: cert for f, _, cert in _prepare(k, congruence_bound)}


def finite_set_witness(records: list[CriticalValueRecord], certs: dict[str, BoundCertificate]) -> tuple[set, bool]:
    """Odd non-conductor denominator primes over a scan, and whether they fit inside the coarse sets."""
    seen = set()
    ok = True
    for rec in records:
        NN = rec.conductor_product
        for p in rec.denominator.rational_primes():
            if p == 2 or NN % p == 0:
                continue
            seen.add(p)
            if p not in certs[rec.form].coarse:
                ok = False
    return seen, ok


def max_valuations(records: list[CriticalValueRecord]) -> dict[tuple[str, int], int]:
    """Largest denominator exponent observed per (form, rational prime)."""
    out: dict[tuple[str, int], int] = {}
    for rec in records:
        for P, e in rec.denominator.items():
            key = (rec.form, P.p)
            out[key] = max(out.get(key, 0), -e)
    return out


# ---------------------------------------------------------------------------
# the auxiliary prime q0


@dataclass
class Q0Result:
    q0: int | None
    residue: object = None
    tried: list = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.q0 is not None


def _omega_coords(x, D: int) -> tuple[Fraction, Fraction]:
    # x = u + v*omega with omega = sqrt D or (1 + sqrt D)/2
    if isinstance(x, QuadraticNumber) or (isinstance(x, CompositeNumber) and x.D != 1):
        a = Fraction(x.num0[0], x.den)
        b = Fraction(x.num1[0], x.den)
        if D % 4 == 1:
            return a - b, 2 * b
        return a, b
    return Fraction(x), Fraction(0)


def residue(x, P: PrimeIdeal):
    """Image of a P-integral element in the residue field (an int, or a pair mod p for inert P)."""
    p = P.p
    if P.D == 1 or P.tag == "rational":
        r = Fraction(x)
        return r.numerator * pow(r.denominator, -1, p) % p
    u, v = _omega_coords(x, P.D)
    inv = lambda c: c.numerator * pow(c.denominator, -1, p) % p
    if P.tag == "inert":
        return (inv(u), inv(v))
    t, c = (1, (P.D - 1) // 4) if P.D % 4 == 1 else (0, P.D)
    r = P.root
    if r is None:
        r = next(r for r in range(p) if (r * r - t * r - c) % p == 0)
    return (inv(u) + inv(v) * r) % p


def find_q0(f: Eigenform, l2: int, P: PrimeIdeal | int, Q: int) -> Q0Result:
    """Smallest prime q0 <= Q, q0 outside P, with 1 - a(q0) q0^(1-l2) + q0^(k-2l2+1) a P-unit.

    The factor is scaled by the unit q0^(l2-1) to q0^(l2-1) - a(q0) + q0^(k-l2)
    before reduction.
    """
    if isinstance(P, int):
        P = primes_above(P, f.D)[0]
    k = f.weight
    if P.p <= k:
        raise ValueError("the prime must lie above p > k")
    out = Q0Result(None)
    for q in primerange(2, Q + 1):
        if q == P.p:
            continue
        x = simplify(Fraction(q) ** (l2 - 1) - f.a(q) + Fraction(q) ** (k - l2))
        res = residue(x, P)
        out.tried.append((q, res))
        if res not in (0, (0, 0)):
            out.q0 = q
            out.residue = res
            return out
    return out
