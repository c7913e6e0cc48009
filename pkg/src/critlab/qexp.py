"""Truncated q-expansions, level-one modular forms, Hecke operators and eigenforms."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import gmpy2

from .bernoulli import dirichlet_L_nonpositive, generalized_bernoulli, zeta_nonpositive
from .characters import DirichletCharacter, multiply
from .fields import (AnyNumber, CompositeNumber, PrimeValuationMap, QuadraticNumber, as_element,
                     common_field, conj_sqrt, lift, simplify, squarefree_part, support)


class InsufficientPrecisionError(ValueError):
    def __init__(self, msg: str, max_precision: int):
        super().__init__(f"{msg} (max valid output precision {max_precision})")
        self.max_precision = max_precision


class UnsupportedDimensionError(ValueError):
    pass


class ConditionError(ValueError):
    """A hypothesis (D1), (D2) or (D3) on (l1, l2, chi1, chi2) is violated."""

    def __init__(self, clause: str, msg: str):
        super().__init__(f"({clause}) violated: {msg}")
        self.clause = clause


# ---------------------------------------------------------------------------
# series arithmetic


def _all_int(a) -> bool:
    return all(type(x) is int for x in a)


def _pack(xs: Sequence[int], bits: int):
    if len(xs) <= 16:
        A = gmpy2.mpz(0)
        for x in reversed(xs):
            A = (A << bits) + x
        return A
    h = len(xs) // 2
    return _pack(xs[:h], bits) + (_pack(xs[h:], bits) << (bits * h))


def _unpack(V, n: int, bits: int, out: list) -> None:
    # digits are signed with |c| < 2^(bits-2), so every low block is a signed remainder
    if n <= 16:
        half = gmpy2.mpz(1) << (bits - 1)
        mask = (gmpy2.mpz(1) << bits) - 1
        for _ in range(n):
            r = V & mask
            if r >= half:
                r -= mask + 1
            out.append(int(r))
            V = (V - r) >> bits
        return
    h = n // 2
    w = bits * h
    low = V & ((gmpy2.mpz(1) << w) - 1)
    if low >> (w - 1):
        low -= gmpy2.mpz(1) << w
    _unpack(low, h, bits, out)
    _unpack((V - low) >> w, n - h, bits, out)


def _kronecker_mul(a: Sequence[int], b: Sequence[int], P: int) -> list[int]:
    # evaluate both series at 2^bits, multiply, read the digits back
    a, b = list(a[:P]), list(b[:P])
    ma = max((abs(x) for x in a), default=0)
    mb = max((abs(x) for x in b), default=0)
    if ma == 0 or mb == 0:
        return [0] * P
    bits = (ma * mb * min(len(a), len(b))).bit_length() + 3
    out: list[int] = []
    _unpack(_pack(a, bits) * _pack(b, bits), P, bits, out)
    return out


def series_mul(a: Sequence, b: Sequence, P: int) -> list:
    P = min(P, len(a), len(b))
    if _all_int(a[:P]) and _all_int(b[:P]):
        if P > 64:
            return _kronecker_mul(a, b, P)
    out = [0] * P
    for i in range(P):
        x = a[i]
        if not x:
            continue
        for j in range(P - i):
            y = b[j]
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def _normalize_coeff(x):
    if isinstance(x, CompositeNumber):
        return simplify(x)
    return x


@dataclass
class QExpansion:
    """sum_{n < precision} c(n) q^n of a given weight."""

    weight: int
    coeffs: list

    @property
    def precision(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def truncate(self, P: int) -> "QExpansion":
        if P > self.precision:
            raise InsufficientPrecisionError("cannot extend a truncated expansion", self.precision)
        return QExpansion(self.weight, list(self.coeffs[:P]))

    def __add__(self, other: "QExpansion") -> "QExpansion":
        if self.weight != other.weight:
            raise ValueError("weights differ")
        P = min(self.precision, other.precision)
        return QExpansion(self.weight, [_normalize_coeff(x + y) for x, y in zip(self.coeffs[:P], other.coeffs[:P])])

    def __neg__(self):
        return QExpansion(self.weight, [-x for x in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "QExpansion":
        return QExpansion(self.weight, [_normalize_coeff(c * x) if x else 0 for x in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, QExpansion):
            P = min(self.precision, other.precision)
            return QExpansion(self.weight + other.weight,
                              [_normalize_coeff(x) for x in series_mul(self.coeffs, other.coeffs, P)])
        return self.scale(other)

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        P = min(self.precision, other.precision)
        return self.weight == other.weight and all(x == y for x, y in zip(self.coeffs[:P], other.coeffs[:P]))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coeffs)

    def valuation(self) -> int:
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return self.precision

    def map(self, fn) -> "QExpansion":
        return QExpansion(self.weight, [fn(c) for c in self.coeffs])


# ---------------------------------------------------------------------------
# level-one forms


def divisor_sigma_list(r: int, P: int) -> list[int]:
    out = [0] * P
    for d in range(1, P):
        dr = d ** r
        for m in range(d, P, d):
            out[m] += dr
    return out


@lru_cache(maxsize=None)
def _eta_cubed(P: int) -> tuple[int, ...]:
    # prod (1-q^n)^3 = sum_k (-1)^k (2k+1) q^(k(k+1)/2)
    out = [0] * P
    k = 0
    while k * (k + 1) // 2 < P:
        out[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    return tuple(out)


@lru_cache(maxsize=8)
def _delta_coeffs(P: int) -> tuple[int, ...]:
    e3 = list(_eta_cubed(P))
    e6 = series_mul(e3, e3, P)
    e12 = series_mul(e6, e6, P)
    e24 = series_mul(e12, e12, P)
    return tuple([0] + e24[:P - 1])


def delta_series(P: int) -> QExpansion:
    """Delta = q prod (1 - q^n)^24 to precision P."""
    if P < 2:
        raise ValueError("precision must be at least 2")
    return QExpansion(12, list(_delta_coeffs(P)))


def eisenstein_normalized(k: int, P: int) -> QExpansion:
    """E_k with constant term 1."""
    if k % 2 or k < 4:
        raise ValueError("k must be even and at least 4")
    c = Fraction(2) / zeta_nonpositive(k)
    assert c.denominator == 1
    c = int(c)
    sig = divisor_sigma_list(k - 1, P)
    return QExpansion(k, [1] + [c * s for s in sig[1:]])


def eisenstein_level1(k: int, P: int) -> QExpansion:
    """Eisenstein series with constant term zeta(1-k)/2 and c(n) = sigma_{k-1}(n)."""
    if k % 2 or k < 4:
        raise ValueError("k must be even and at least 4")
    sig = divisor_sigma_list(k - 1, P)
    return QExpansion(k, [zeta_nonpositive(k) / 2] + sig[1:])


def dim_M(k: int) -> int:
    if k < 0 or k % 2:
        return 0
    if k % 12 == 2:
        return k // 12
    return k // 12 + 1


def dim_S(k: int) -> int:
    if k < 12 or k % 2:
        return 0
    return dim_M(k) - 1


def default_precision(k: int) -> int:
    return 10 * dim_M(k) + 10


@lru_cache(maxsize=None)
def _power_series(kind: int, e: int, P: int) -> tuple[int, ...]:
    # kind 4, 6 or 12 (Delta); cached powers
    if e == 0:
        return tuple([1] + [0] * (P - 1))
    if e == 1:
        if kind == 12:
            return _delta_coeffs(P)
        return tuple(eisenstein_normalized(kind, P).coeffs)
    half = _power_series(kind, e // 2, P)
    sq = series_mul(half, half, P)
    if e % 2:
        sq = series_mul(sq, _power_series(kind, 1, P), P)
    return tuple(sq)


def monomial(a: int, b: int, c: int, P: int) -> QExpansion:
    """E4^a E6^b Delta^c."""
    s = list(_power_series(4, a, P))
    s = series_mul(s, _power_series(6, b, P), P)
    s = series_mul(s, _power_series(12, c, P), P)
    return QExpansion(4 * a + 6 * b + 12 * c, s)


@lru_cache(maxsize=32)
def _miller(k: int, P: int) -> tuple[tuple[int, ...], ...]:
    d = dim_M(k)
    basis = []
    for j in range(d):
        w = k - 12 * j
        if w % 4 == 0:
            a, b = w // 4, 0
        else:
            a, b = (w - 6) // 4, 1
        basis.append(list(monomial(a, b, j, P).coeffs))
    for i in range(d):
        for j in range(i + 1, d):
            c = basis[i][j]
            if c:
                basis[i] = [x - c * y for x, y in zip(basis[i], basis[j])]
    return tuple(tuple(b) for b in basis)


def miller_basis(k: int, P: int) -> list[QExpansion]:
    """Echelon basis f_0..f_{d-1} of M_k(SL2(Z)) with c_{f_i}(j) = delta_ij for j < d."""
    if k % 2 or k < 0:
        raise ValueError("k must be even and non-negative")
    d = dim_M(k)
    if P < d:
        raise InsufficientPrecisionError(f"precision {P} below dimension {d}", P)
    return [QExpansion(k, list(b)) for b in _miller(k, P)]


def cusp_basis(k: int, P: int) -> list[QExpansion]:
    return miller_basis(k, P)[1:] if dim_M(k) else []


def express_in_basis(f: QExpansion, basis: list[QExpansion], check: bool = True) -> list:
    """Coordinates of f in an echelon basis (leading coefficients at 0, 1, ... or 1, 2, ...).

    With ``check`` the full available precision is compared.
    """
    starts = [b.valuation() for b in basis]
    coords = []
    rest = f
    for s, b in zip(starts, basis):
        c = rest[s]
        coords.append(c)
        if c:
            rest = rest - b.scale(c)
    if check and not rest.is_zero():
        raise ValueError("form is not in the span of the basis")
    return coords


def hecke_T(m: int, k: int, f: QExpansion, prec: int | None = None) -> QExpansion:
    """(T_m f)(n) = sum_{d | gcd(m, n)} d^(k-1) c(mn/d^2)."""
    P = f.precision
    max_out = P // m
    if prec is None:
        prec = max_out
    if prec > max_out or prec < 1:
        raise InsufficientPrecisionError(f"T({m}) needs {m * prec} input coefficients, have {P}", max_out)
    if m == 1:
        return QExpansion(f.weight, list(f.coeffs[:prec]))
    divisors = [d for d in range(1, m + 1) if m % d == 0]
    out = []
    for n in range(prec):
        s = 0
        for d in divisors:
            if n % d == 0:
                term = f[m * n // (d * d)]
                if term:
                    s = term * d ** (k - 1) + s
        out.append(_normalize_coeff(s))
    return QExpansion(f.weight, out)


# ---------------------------------------------------------------------------
# eigenforms


@dataclass
class Eigenform:
    """Normalized level-one Hecke eigenform with coefficients in Q or Q(sqrt D)."""

    weight: int
    D: int
    coeffs: list
    index: int = 0
    label: str = ""

    @property
    def precision(self) -> int:
        return len(self.coeffs)

    @property
    def degree(self) -> int:
        return 1 if self.D == 1 else 2

    def a(self, n: int):
        if n >= len(self.coeffs):
            raise InsufficientPrecisionError(f"coefficient {n} not available", len(self.coeffs))
        return self.coeffs[n]

    def qexp(self) -> QExpansion:
        return QExpansion(self.weight, list(self.coeffs))

    def embed(self, n: int) -> float:
        """Real value of a(n) under the embedding sqrt(D) > 0."""
        x = self.coeffs[n]
        if isinstance(x, CompositeNumber):
            return float(Fraction(x.num0[0], x.den)) + float(Fraction(x.num1[0], x.den)) * math.sqrt(x.D)
        return float(x)


_EIGEN_CACHE: dict[int, tuple[int, list[Eigenform]]] = {}


def eigenforms(k: int, P: int | None = None) -> list[Eigenform]:
    """Normalized eigenforms of S_k(SL2(Z)) for dim S_k <= 2.

    Quadratic eigenforms are ordered with the positive sqrt(D) component of
    a(2) first.
    """
    d = dim_S(k)
    if d > 2:
        raise UnsupportedDimensionError(f"dim S_{k} = {d} > 2 is not supported")
    if P is None:
        P = default_precision(k)
    if d == 0:
        return []
    cached = _EIGEN_CACHE.get(k)
    if cached and cached[0] >= P:
        return [Eigenform(f.weight, f.D, f.coeffs[:P], f.index, f.label) for f in cached[1]]
    work = max(P, 2 * (d + 2))
    cusp = cusp_basis(k, work)
    if d == 1:
        forms = [Eigenform(k, 1, list(cusp[0].coeffs), 0, f"{k}.0")]
    else:
        f1, f2 = cusp
        # T(2) f_i = M[i][0] f1 + M[i][1] f2 read off at q^1, q^2
        t1, t2 = hecke_T(2, k, f1, 3), hecke_T(2, k, f2, 3)
        M = [[t1[1], t1[2]], [t2[1], t2[2]]]
        tr = M[0][0] + M[1][1]
        det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
        disc = tr * tr - 4 * det
        D = squarefree_part(disc)
        s = math.isqrt(disc // D)
        assert s * s * D == disc and D != 1
        forms = []
        for i, sgn in enumerate((1, -1)):
            lam = QuadraticNumber(D, Fraction(tr, 2), Fraction(sgn * s, 2))
            w = (lam - M[0][0]) / M[1][0]
            coeffs = [0] + [simplify(w * y + x) for x, y in zip(f1.coeffs[1:], f2.coeffs[1:])]
            forms.append(Eigenform(k, D, coeffs, i, f"{k}.{i}"))
    _EIGEN_CACHE[k] = (work, forms)
    return [Eigenform(f.weight, f.D, f.coeffs[:P], f.index, f.label) for f in forms]


def t2_charpoly_disc(k: int) -> int:
    """Discriminant of the characteristic polynomial of T(2) on S_k (Miller basis)."""
    cusp = cusp_basis(k, 2 * (dim_S(k) + 2))
    d = len(cusp)
    M = [[hecke_T(2, k, f, d + 1)[j + 1] for j in range(d)] for f in cusp]
    if d == 1:
        return 0
    tr = M[0][0] + M[1][1]
    det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
    return tr * tr - 4 * det


# ---------------------------------------------------------------------------
# congruence ideals


@dataclass
class CongruenceIdeal:
    """Ideal of Q(f) generated by eigenvalue differences with the other eigenforms.

    ``ideal`` is generated by the products over the other eigenforms of
    a_{f_i}(m) - a_f(m), one m at a time; ``tuple_ideal`` allows a separate
    m_i for each factor.  For dim S_k <= 2 there is a single factor and the
    two presentations coincide.
    """

    owner: str
    D: int
    ideal: PrimeValuationMap
    tuple_ideal: PrimeValuationMap
    witnesses: list = field(default_factory=list)

    def is_unit(self) -> bool:
        return not self.ideal

    def norm(self) -> int:
        out = 1
        for P, e in self.ideal.items():
            f = 2 if P.tag == "inert" else 1
            out *= P.p ** (f * e)
        return out

    def norm_primes(self) -> set[int]:
        return self.ideal.rational_primes()


def congruence_ideal(f: Eigenform, M: int) -> CongruenceIdeal:
    forms = eigenforms(f.weight, max(M + 1, default_precision(f.weight)))
    others = [g for g in forms if g.index != f.index]
    if not others:
        return CongruenceIdeal(f.label, f.D, PrimeValuationMap(), PrimeValuationMap(), [])
    current = None
    witnesses = []
    mine = [g for g in forms if g.index == f.index][0]
    for m in range(1, M + 1):
        prod = 1
        for g in others:
            prod = (g.a(m) - mine.a(m)) * prod
        prod = simplify(prod)
        if prod == 0:
            continue
        witnesses.append((m, prod))
        sup = support(prod)
        current = sup if current is None else current.gcd(sup)
    current = current if current is not None else PrimeValuationMap()
    # with a single other eigenform the tuple products are the same set
    tuple_ideal = PrimeValuationMap(dict(current))
    return CongruenceIdeal(f.label, f.D, current, tuple_ideal, witnesses)


def isolate_eigencomponent(G: QExpansion, targets: list[tuple[int, AnyNumber]], k: int | None = None) -> QExpansion:
    """prod_i (T(m_i) - lambda_i) applied to G."""
    k = G.weight if k is None else k
    out = G
    for m, lam in targets:
        Tm = hecke_T(m, k, out)
        out = Tm - out.truncate(Tm.precision).scale(lam)
    return out


# ---------------------------------------------------------------------------
# the auxiliary Eisenstein series g


def check_conditions(k: int | None, l1: int, l2: int, chi1: DirichletCharacter, chi2: DirichletCharacter,
                     require_d3: bool = True) -> None:
    s = chi1.sign() * chi2.sign()
    if s != (-1) ** (l1 + l2 + 1):
        raise ConditionError("D1", f"(chi1 chi2)(-1) = {s} but (-1)^(l1+l2+1) = {(-1) ** (l1 + l2 + 1)}")
    if k is not None and not (k - l1 + 1 <= l2 <= l1 - 1 <= k - 2):
        raise ConditionError("D2", f"need {k}-l1+1 <= l2 <= l1-1 <= {k - 2} with l1={l1}, l2={l2}")
    if require_d3 and not (l1 >= l2 + 2 or (l1 == l2 + 1 and not (chi1.is_trivial() and chi2.is_trivial()))):
        raise ConditionError("D3", "need l1 >= l2+2, or l1 = l2+1 with a non-trivial character")


def aux_form_g(l1: int, l2: int, chi1: DirichletCharacter, chi2: DirichletCharacter, P: int,
               k: int | None = None) -> QExpansion:
    """Weight l1-l2+1 Eisenstein series with c(m) = sum_{d | m} chi1(m/d) chi2(d) d^(l1-l2)."""
    check_conditions(k, l1, l2, chi1, chi2, require_d3=k is not None)
    r = l1 - l2
    if chi1.modulus > 1:
        c0 = Fraction(0)
    elif r == 1 and chi2.modulus == 1:
        c0 = Fraction(-(1 - chi1.modulus * chi2.modulus), 24)
    else:
        psi = multiply(chi1, chi2)
        c0 = simplify(generalized_bernoulli(r + 1, psi) * Fraction(-1, 2 * (r + 1)))
    coeffs = [c0]
    for m in range(1, P):
        s = 0
        for d in range(1, m + 1):
            if m % d == 0:
                a = chi1(m // d)
                if a == 0:
                    continue
                b = chi2(d)
                if b == 0:
                    continue
                s = a * b * d ** r + s
        coeffs.append(_normalize_coeff(s) if not isinstance(s, int) else s)
    return QExpansion(r + 1, coeffs)
