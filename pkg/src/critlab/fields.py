"""Exact arithmetic in Q, Q(sqrt D), Q(zeta_N) and the composite Q(zeta_N, sqrt D).

Elements are stored as integer numerator vectors over a common positive
denominator.  The first vector holds the coordinates of ``c0`` in the power
basis ``1, zeta, ..., zeta^(phi(N)-1)``, the second those of ``c1`` in
``c0 + c1*sqrt(D)``.  Plain rationals are kept as :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

from sympy import factorint, totient
from sympy.ntheory import sqrt_mod
from sympy.functions.combinatorial.numbers import kronecker_symbol

Rational = Fraction
INFINITY = math.inf


class IncompatibleFieldsError(ValueError):
    pass


class InvalidPrimeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# cyclotomic polynomials and reduction tables


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (constant term first) of the n-th cyclotomic polynomial.

    Computed by dividing x^n - 1 by the cyclotomic polynomials of the proper
    divisors of n.  The lru_cache is the write-once cache.
    """
    if n < 1:
        raise ValueError("modulus must be positive")
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _exact_divide(num, cyclotomic_poly(d))
    return tuple(num)


def _exact_divide(a: list[int], b: Sequence[int]) -> list[int]:
    # b is monic
    a = list(a)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    if any(a[:db]):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return int(totient(n))


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Row j is zeta_n^j reduced to the power basis, for 0 <= j < max(n, 2*phi-1)."""
    phi = euler_phi(n)
    poly = cyclotomic_poly(n)
    rows = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(max(n, 2 * phi - 1)):
        rows.append(tuple(cur))
        # multiply by x and reduce the x^phi term
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(phi):
                cur[i] -= top * poly[i]
    return tuple(rows)


def _reduce_long(vec: list[int], n: int) -> list[int]:
    phi = euler_phi(n)
    if len(vec) <= phi:
        return vec + [0] * (phi - len(vec))
    table = _power_table(n)
    out = vec[:phi]
    for j in range(phi, len(vec)):
        c = vec[j]
        if c:
            row = table[j]
            for i in range(phi):
                if row[i]:
                    out[i] += c * row[i]
    return out


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def squarefree_part(d: int) -> int:
    if d == 0:
        raise ValueError("zero has no squarefree part")
    sign = -1 if d < 0 else 1
    out = 1
    for p, e in factorint(abs(d)).items():
        if e % 2:
            out *= p
    return sign * out


def quadratic_discriminant(D: int) -> int:
    """Field discriminant of Q(sqrt D) for squarefree D != 1."""
    return D if D % 4 == 1 else 4 * D


# ---------------------------------------------------------------------------
# field elements


class CompositeNumber:
    """Element c0 + c1*sqrt(D) of Q(zeta_N, sqrt(D)), canonically reduced."""

    __slots__ = ("N", "D", "num0", "num1", "den")

    def __init__(self, N: int, D: int, c0: Iterable, c1: Iterable | None = None):
        c0 = [Fraction(c) for c in c0]
        c1 = [Fraction(0)] * len(c0) if c1 is None else [Fraction(c) for c in c1]
        phi = euler_phi(N)
        if len(c0) != phi or len(c1) != phi:
            raise ValueError(f"coefficient vectors must have length phi({N}) = {phi}")
        den = 1
        for c in c0 + c1:
            den = den * c.denominator // math.gcd(den, c.denominator)
        _init(self, N, D, [int(c * den) for c in c0], [int(c * den) for c in c1], den)

    # -- construction helpers -------------------------------------------
    @classmethod
    def _raw(cls, N, D, num0, num1, den):
        obj = object.__new__(_class_for(N, D))
        _init(obj, N, D, num0, num1, den)
        return obj

    @property
    def c0(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(a, self.den) for a in self.num0)

    @property
    def c1(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(a, self.den) for a in self.num1)

    @property
    def field(self) -> tuple[int, int]:
        return (self.N, self.D)

    def is_zero(self) -> bool:
        return not any(self.num0) and not any(self.num1)

    def is_rational(self) -> bool:
        return not any(self.num0[1:]) and not any(self.num1)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.num0[0], self.den)

    def cyclotomic_parts(self) -> tuple["CompositeNumber", "CompositeNumber"]:
        """(c0, c1) as elements of Q(zeta_N)."""
        return (CompositeNumber._raw(self.N, 1, list(self.num0), [0] * len(self.num0), self.den),
                CompositeNumber._raw(self.N, 1, list(self.num1), [0] * len(self.num1), self.den))

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, CompositeNumber):
            if other.field == self.field:
                return self, other
            N, D = _join_fields(self.field, other.field)
            return lift(self, N, D), lift(other, N, D)
        if isinstance(other, (int, Fraction)):
            return self, from_rational(other, self.N, self.D)
        return NotImplemented, NotImplemented

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        n0 = [x * b.den + y * a.den for x, y in zip(a.num0, b.num0)]
        n1 = [x * b.den + y * a.den for x, y in zip(a.num1, b.num1)]
        return CompositeNumber._raw(a.N, a.D, n0, n1, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return CompositeNumber._raw(self.N, self.D, [-x for x in self.num0], [-x for x in self.num1], self.den)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return CompositeNumber._raw(self.N, self.D, [x * other.numerator for x in self.num0],
                                        [x * other.numerator for x in self.num1],
                                        self.den * other.denominator)
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return _mul_same(a, b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in number field")
            return self * (1 / Fraction(other))
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return _mul_same(a, field_inv(b))

    def __rtruediv__(self, other):
        return field_inv(self) * other

    def __pow__(self, e: int):
        if e < 0:
            return field_inv(self) ** (-e)
        result = from_rational(1, self.N, self.D)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.to_fraction() == other
        if isinstance(other, CompositeNumber):
            a, b = self._coerce(other)
            return a.num0 == b.num0 and a.num1 == b.num1 and a.den == b.den
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.to_fraction())
        return hash(("algebraic", self.D))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        parts = []
        for vec, tag in ((self.num0, ""), (self.num1, f"*sqrt({self.D})")):
            for i, a in enumerate(vec):
                if a:
                    c = Fraction(a, self.den)
                    mono = "" if i == 0 else (f"z{self.N}" if i == 1 else f"z{self.N}^{i}")
                    term = str(c) if not mono else f"({c})*{mono}"
                    parts.append(term + tag)
        return " + ".join(parts) if parts else "0"

    def __complex__(self):
        return to_complex(self)


class CyclotomicNumber(CompositeNumber):
    """Element of Q(zeta_N) given by its power-basis coordinates."""

    __slots__ = ()

    def __init__(self, N: int, coeffs: Iterable):
        super().__init__(N, 1, coeffs)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self.c0


class QuadraticNumber(CompositeNumber):
    """a + b*sqrt(D) with D squarefree."""

    __slots__ = ()

    def __init__(self, D: int, a, b):
        super().__init__(1, D, [a], [b])

    @property
    def a(self) -> Fraction:
        return Fraction(self.num0[0], self.den)

    @property
    def b(self) -> Fraction:
        return Fraction(self.num1[0], self.den)

    def conjugate(self) -> "QuadraticNumber":
        return conj_sqrt(self)

    def norm(self) -> Fraction:
        return self.a ** 2 - self.D * self.b ** 2

    def trace(self) -> Fraction:
        return 2 * self.a


def _class_for(N, D):
    if D == 1:
        return CyclotomicNumber
    if N == 1:
        return QuadraticNumber
    return CompositeNumber


def _init(obj, N, D, num0, num1, den):
    if N < 1:
        raise ValueError("cyclotomic modulus must be positive")
    if D == 0 or (D != 1 and squarefree_part(D) != D):
        raise ValueError(f"D = {D} is not squarefree")
    if D != 1:
        disc = abs(quadratic_discriminant(D))
        if (2 * N if N % 2 else N) % disc == 0:
            raise IncompatibleFieldsError(f"sqrt({D}) already lies in Q(zeta_{N})")
    if D == 1:
        num1 = [0] * len(num0)
    if den < 0:
        den, num0, num1 = -den, [-x for x in num0], [-x for x in num1]
    g = den
    for x in num0:
        g = math.gcd(g, x)
    for x in num1:
        g = math.gcd(g, x)
    if g > 1:
        num0 = [x // g for x in num0]
        num1 = [x // g for x in num1]
        den //= g
    if not any(num0) and not any(num1):
        den = 1
    obj.N, obj.D = N, D
    obj.num0, obj.num1, obj.den = tuple(num0), tuple(num1), den


def _mul_cyc(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    if not any(a) or not any(b):
        return [0] * euler_phi(n)
    return _reduce_long(_poly_mul(a, b), n)


def _mul_same(a: CompositeNumber, b: CompositeNumber) -> CompositeNumber:
    n = a.N
    if a.D == 1:
        n0 = _mul_cyc(a.num0, b.num0, n)
        return CompositeNumber._raw(n, 1, n0, [0] * len(n0), a.den * b.den)
    p00 = _mul_cyc(a.num0, b.num0, n)
    p11 = _mul_cyc(a.num1, b.num1, n)
    p01 = _mul_cyc(a.num0, b.num1, n)
    p10 = _mul_cyc(a.num1, b.num0, n)
    n0 = [x + a.D * y for x, y in zip(p00, p11)]
    n1 = [x + y for x, y in zip(p01, p10)]
    return CompositeNumber._raw(n, a.D, n0, n1, a.den * b.den)


def _join_fields(f1, f2):
    (N1, D1), (N2, D2) = f1, f2
    if D1 != 1 and D2 != 1 and D1 != D2:
        raise IncompatibleFieldsError(f"cannot combine sqrt({D1}) and sqrt({D2})")
    return N1 * N2 // math.gcd(N1, N2), (D1 if D1 != 1 else D2)


AnyNumber = Union[int, Fraction, CompositeNumber]


# ---------------------------------------------------------------------------
# constructors and field moves


def from_rational(r, N: int = 1, D: int = 1) -> CompositeNumber:
    r = Fraction(r)
    phi = euler_phi(N)
    return CompositeNumber._raw(N, D, [r.numerator] + [0] * (phi - 1), [0] * phi, r.denominator)


def zeta(N: int, j: int = 1) -> CyclotomicNumber:
    """zeta_N^j with zeta_N = exp(2*pi*i/N)."""
    row = _power_table(N)[j % N]
    return CompositeNumber._raw(N, 1, list(row), [0] * len(row), 1)


def from_exponent_counts(N: int, counts: dict[int, int] | Sequence[int]) -> CyclotomicNumber:
    """Sum of c_j * zeta_N^j from a map (or list) j -> c_j of integers or fractions."""
    items = counts.items() if isinstance(counts, dict) else enumerate(counts)
    table = _power_table(N)
    phi = euler_phi(N)
    den = 1
    vals = []
    for j, c in items:
        c = Fraction(c)
        if c:
            vals.append((j % N, c))
            den = den * c.denominator // math.gcd(den, c.denominator)
    out = [0] * phi
    for j, c in vals:
        m = int(c * den)
        row = table[j]
        for i in range(phi):
            if row[i]:
                out[i] += m * row[i]
    return CompositeNumber._raw(N, 1, out, [0] * phi, den)


def sqrt_D(D: int, N: int = 1) -> CompositeNumber:
    phi = euler_phi(N)
    return CompositeNumber._raw(N, D, [0] * phi, [1] + [0] * (phi - 1), 1)


def lift(x: AnyNumber, N: int, D: int = 1) -> CompositeNumber:
    """Embed x into Q(zeta_N, sqrt D) via zeta_M -> zeta_N^(N/M)."""
    if isinstance(x, (int, Fraction)):
        return from_rational(x, N, D)
    if N % x.N:
        raise IncompatibleFieldsError(f"Q(zeta_{x.N}) is not contained in Q(zeta_{N})")
    if x.D != 1 and x.D != D:
        raise IncompatibleFieldsError(f"sqrt({x.D}) is not in the target field")
    if x.N == N and x.D == D:
        return x
    step = N // x.N
    table = _power_table(N)
    phi = euler_phi(N)

    def move(vec):
        out = [0] * phi
        for i, a in enumerate(vec):
            if a:
                row = table[(i * step) % N]
                for t in range(phi):
                    if row[t]:
                        out[t] += a * row[t]
        return out

    return CompositeNumber._raw(N, D, move(x.num0), move(x.num1), x.den)


def common_field(*xs: AnyNumber) -> tuple[int, int]:
    N, D = 1, 1
    for x in xs:
        if isinstance(x, CompositeNumber):
            N, D = _join_fields((N, D), x.field)
    return N, D


def as_element(x: AnyNumber, N: int = 1, D: int = 1) -> CompositeNumber:
    if isinstance(x, CompositeNumber):
        n2, d2 = _join_fields(x.field, (N, D))
        return lift(x, n2, d2)
    return from_rational(x, N, D)


def simplify(x: AnyNumber) -> AnyNumber:
    """Return a Fraction when x is rational, else x unchanged."""
    if isinstance(x, CompositeNumber) and x.is_rational():
        return x.to_fraction()
    if isinstance(x, int):
        return Fraction(x)
    return x


def sigma(x: AnyNumber, a: int) -> AnyNumber:
    """Galois automorphism zeta_N -> zeta_N^a (a coprime to N), fixing sqrt D."""
    if not isinstance(x, CompositeNumber):
        return x
    N = x.N
    if math.gcd(a, N) != 1:
        raise ValueError(f"{a} is not a unit modulo {N}")
    table = _power_table(N)
    phi = euler_phi(N)

    def move(vec):
        out = [0] * phi
        for i, c in enumerate(vec):
            if c:
                row = table[(i * a) % N]
                for t in range(phi):
                    if row[t]:
                        out[t] += c * row[t]
        return out

    return CompositeNumber._raw(N, x.D, move(x.num0), move(x.num1), x.den)


def conj_sqrt(x: AnyNumber) -> AnyNumber:
    """Automorphism sqrt D -> -sqrt D, fixing zeta_N."""
    if not isinstance(x, CompositeNumber):
        return x
    return CompositeNumber._raw(x.N, x.D, list(x.num0), [-c for c in x.num1], x.den)


def complex_conjugate(x: AnyNumber) -> AnyNumber:
    out = sigma(x, -1)
    if isinstance(out, CompositeNumber) and out.D < 0:
        out = conj_sqrt(out)
    return out


def to_complex(x: AnyNumber, sqrt_sign: int = 1) -> complex:
    if not isinstance(x, CompositeNumber):
        return complex(Fraction(x))
    N = x.N
    z = [complex(math.cos(2 * math.pi * i / N), math.sin(2 * math.pi * i / N)) for i in range(len(x.num0))]
    c0 = sum(a * w for a, w in zip(x.num0, z))
    c1 = sum(a * w for a, w in zip(x.num1, z))
    s = math.sqrt(abs(x.D)) * (1 if x.D > 0 else 1j) * sqrt_sign
    return (c0 + c1 * s) / x.den


# ---------------------------------------------------------------------------
# spec-level operations


def _check_same(x: CompositeNumber, y: CompositeNumber):
    if x.field != y.field:
        raise IncompatibleFieldsError(f"field mismatch: {x.field} vs {y.field}")


def field_mul(x: CompositeNumber, y: CompositeNumber) -> CompositeNumber:
    """Product of two elements of the same field Q(zeta_N, sqrt D)."""
    _check_same(x, y)
    return _mul_same(x, y)


def _cyc_inverse(num: Sequence[int], N: int) -> list[Fraction]:
    # extended Euclid in Q[x] against Phi_N
    def trim(p):
        p = list(p)
        while p and p[-1] == 0:
            p.pop()
        return p

    def sub(a, b):
        n = max(len(a), len(b))
        return trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])

    def mulp(a, b):
        if not a or not b:
            return []
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return trim(out)

    def divmod_(a, b):
        a = list(a)
        q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
        while len(a) >= len(b) and a:
            c = a[-1] / b[-1]
            shift = len(a) - len(b)
            q[shift] = c
            for i, y in enumerate(b):
                a[shift + i] -= c * y
            a = trim(a)
        return trim(q), a

    r0 = [Fraction(c) for c in cyclotomic_poly(N)]
    r1 = trim([Fraction(c) for c in num])
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mulp(q, s1))
    if not r1:
        raise ZeroDivisionError("element is not invertible")
    inv = [c / r1[0] for c in s1]
    phi = euler_phi(N)
    if len(inv) > phi:
        raise ArithmeticError("inverse degree overflow")
    return inv + [Fraction(0)] * (phi - len(inv))


def field_inv(x: CompositeNumber) -> CompositeNumber:
    if isinstance(x, (int, Fraction)):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)
    if x.is_zero():
        raise ZeroDivisionError("inverse of zero")
    N, D = x.field
    if x.is_rational():
        return from_rational(1 / x.to_fraction(), N, D)
    c0, c1 = x.cyclotomic_parts()
    if x.D == 1 or not any(x.num1):
        inv = CompositeNumber(N, 1, _cyc_inverse(x.num0, N))
        inv = lift(inv, N, D) * x.den
        return inv
    # (c0 + c1 r)^-1 = (c0 - c1 r) / (c0^2 - D c1^2)
    nrm = c0 * c0 - c1 * c1 * x.D
    inv_n = field_inv(nrm)
    conj = lift(c0, N, D) - lift(c1, N, D) * sqrt_D(D, N)
    return conj * lift(inv_n, N, D)


def relative_norm(x: AnyNumber, sub_modulus: int | None = None) -> AnyNumber:
    """Norm from Q(zeta_m, sqrt D) down to Q(sqrt D).

    ``m`` defaults to x.N.  When x is stored in a larger cyclotomic field the
    caller passes the modulus m of the subfield that actually contains x; the
    product then runs over lifts of (Z/m)^x and the result is checked to lie
    in Q(sqrt D).
    """
    if not isinstance(x, CompositeNumber):
        return Fraction(x)
    N = x.N
    m = N if sub_modulus is None else sub_modulus
    if N % m:
        raise ValueError("sub-modulus must divide the modulus")
    reps = []
    for u in range(1, m + 1):
        if math.gcd(u, m) != 1:
            continue
        a = u
        while math.gcd(a, N) != 1:
            a += m
        reps.append(a)
    out = from_rational(1, N, x.D)
    for a in reps:
        out = out * sigma(x, a)
    if any(out.num0[1:]) or any(out.num1[1:]):
        raise ArithmeticError("element does not lie in the stated subfield")
    if out.D == 1:
        return Fraction(out.num0[0], out.den)
    return QuadraticNumber(out.D, Fraction(out.num0[0], out.den), Fraction(out.num1[0], out.den))


def absolute_norm(x: AnyNumber) -> Fraction:
    n = relative_norm(x)
    if isinstance(n, QuadraticNumber):
        return n.norm()
    return Fraction(n)


# ---------------------------------------------------------------------------
# primes and valuations


@dataclass(frozen=True, order=True)
class PrimeIdeal:
    """Prime of Q (D = 1) or of Q(sqrt D).

    ``tag`` is one of 'rational', 'split', 'inert', 'ramified'.  For split
    primes ``root`` is the residue r selecting (p, omega - r), where omega is
    sqrt(D) or (1 + sqrt(D))/2 according to D mod 4.
    """

    p: int
    D: int = 1
    tag: str = "rational"
    root: int | None = None

    def label(self) -> str:
        return f"split:{self.root}" if self.tag == "split" else self.tag


def _omega_minpoly(D: int) -> tuple[int, int]:
    # omega^2 = t*omega + c
    if D % 4 == 1:
        return 1, (D - 1) // 4
    return 0, D


def splitting_type(D: int, p: int) -> str:
    if D == 1:
        return "rational"
    k = kronecker_symbol(quadratic_discriminant(D), p)
    return {1: "split", -1: "inert", 0: "ramified"}[int(k)]


def primes_above(p: int, D: int = 1) -> list[PrimeIdeal]:
    return list(_primes_above(p, D))


@lru_cache(maxsize=None)
def _primes_above(p: int, D: int) -> tuple[PrimeIdeal, ...]:
    tag = splitting_type(D, p)
    if tag != "split":
        return (PrimeIdeal(p, D, tag),)
    t, c = _omega_minpoly(D)
    if p == 2:
        roots = [r for r in range(2) if (r * r - t * r - c) % 2 == 0]
    else:
        # roots of w^2 - t w - c are (t +- s)/2 with s^2 = t^2 + 4c
        half = pow(2, -1, p)
        roots = {(t + s) * half % p for s in sqrt_mod((t * t + 4 * c) % p, p, all_roots=True)}
    return tuple(PrimeIdeal(p, D, "split", r) for r in sorted(roots))


def _vp_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(x, p: int):
    """p-adic valuation of a rational number (infinity for 0)."""
    x = Fraction(x)
    if x == 0:
        return INFINITY
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


def integral_coordinates(x: CompositeNumber) -> tuple[list[Fraction], list[Fraction]]:
    """Coordinates of x in the basis zeta^i, zeta^i*omega of Z[zeta_N] (x) O_K.

    This is an integral basis only when disc(K) is coprime to N, which is
    checked.
    """
    c0, c1 = list(x.c0), list(x.c1)
    if x.D == 1:
        return c0, [Fraction(0)] * len(c0)
    if math.gcd(quadratic_discriminant(x.D), x.N) != 1:
        raise NotImplementedError("integral basis needs coprime discriminants")
    if x.D % 4 == 1:
        # c0 + c1*sqrt D = (c0 - c1) + 2*c1*omega
        return [a - b for a, b in zip(c0, c1)], [2 * b for b in c1]
    return c0, c1


def _quadratic_padic_valuation(x: QuadraticNumber, P: PrimeIdeal):
    D, p = x.D, P.p
    (u0,), (u1,) = integral_coordinates(x)
    if P.tag == "inert":
        return min(vp(u0, p), vp(u1, p))
    if P.tag == "ramified":
        return vp(x.norm(), p)
    # split: evaluate u0 + u1*omega_P in Z_p with omega_P = root lifted by Hensel
    shift = min(vp(u0, p), vp(u1, p))
    scale = Fraction(p) ** (-shift)
    a, b = u0 * scale, u1 * scale
    nv = vp(x.norm(), p) - 2 * shift
    prec = int(nv) + 2
    mod = p ** prec
    t, c = _omega_minpoly(D)
    r = P.root
    # Hensel lift of the simple root r of f(w) = w^2 - t w - c
    for _ in range(prec.bit_length() + 1):
        f = r * r - t * r - c
        df = 2 * r - t
        r = (r - f * pow(df, -1, mod)) % mod
    val = (a.numerator * pow(a.denominator, -1, mod) + b.numerator * pow(b.denominator, -1, mod) * r) % mod
    if val == 0:
        raise ArithmeticError("insufficient p-adic precision")
    return shift + _vp_int(val, p)


def valuation(x: AnyNumber, P) -> float | int:
    """Order of x at the prime P (an int for primes of Q, or a PrimeIdeal)."""
    if isinstance(P, int):
        P = PrimeIdeal(P)
    if isinstance(x, CompositeNumber) and x.is_zero():
        return INFINITY
    if not isinstance(x, CompositeNumber) or x.is_rational():
        r = Fraction(x) if not isinstance(x, CompositeNumber) else x.to_fraction()
        if r == 0:
            return INFINITY
        v = vp(r, P.p)
        return 2 * v if P.tag == "ramified" else v
    if x.N != 1 and any(x.num0[1:]) or (x.N != 1 and any(x.num1[1:])):
        raise InvalidPrimeError("prime descriptors cover Q and quadratic fields only")
    if P.D != x.D:
        raise InvalidPrimeError(f"prime {P} does not belong to Q(sqrt {x.D})")
    expected = splitting_type(x.D, P.p)
    if P.tag != expected:
        raise InvalidPrimeError(f"{P.p} is {expected} in Q(sqrt {x.D}), not {P.tag}")
    if P.tag == "split" and P.root not in [q.root for q in primes_above(P.p, x.D)]:
        raise InvalidPrimeError(f"{P.root} is not a root selecting a prime above {P.p}")
    if x.N != 1:
        x = QuadraticNumber(x.D, Fraction(x.num0[0], x.den), Fraction(x.num1[0], x.den))
    return _quadratic_padic_valuation(x, P)


class PrimeValuationMap(dict):
    """Finite map PrimeIdeal -> nonzero integer exponent, iterated in sorted order."""

    def __init__(self, entries=None):
        super().__init__()
        for k, v in (entries or {}).items():
            if v:
                self[k] = v

    def items_sorted(self):
        return sorted(self.items())

    def rational_primes(self) -> set[int]:
        return {P.p for P in self}

    def gcd(self, other: "PrimeValuationMap") -> "PrimeValuationMap":
        keys = set(self) | set(other)
        return PrimeValuationMap({k: min(self.get(k, 0), other.get(k, 0)) for k in keys})

    def triples(self) -> list[list]:
        return [[P.p, P.label(), e] for P, e in self.items_sorted()]

    def __repr__(self):
        return "{" + ", ".join(f"{P.p}[{P.label()}]:{e}" for P, e in self.items_sorted()) + "}"


def _candidate_primes(x: AnyNumber) -> set[int]:
    if not isinstance(x, CompositeNumber):
        return set(factorint(Fraction(x).denominator))
    u0, u1 = integral_coordinates(x)
    den = 1
    for c in u0 + u1:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return set(factorint(den))


def denominator_primes(x: AnyNumber) -> set[int]:
    """Rational primes lying under some prime where x has negative valuation."""
    if isinstance(x, CompositeNumber) and x.is_rational():
        x = x.to_fraction()
    return _candidate_primes(x)


def support(x: AnyNumber) -> PrimeValuationMap:
    """Full factorization of the principal fractional ideal (x) in Q or Q(sqrt D)."""
    if isinstance(x, CompositeNumber) and x.is_rational():
        x = x.to_fraction()
    if not isinstance(x, CompositeNumber):
        x = Fraction(x)
        if x == 0:
            raise ValueError("zero has no factorization")
        out = {}
        for p, e in factorint(x.numerator).items():
            out[PrimeIdeal(p)] = e
        for p, e in factorint(x.denominator).items():
            out[PrimeIdeal(p)] = -e
        return PrimeValuationMap(out)
    if x.N != 1:
        raise InvalidPrimeError("support is defined for rational and quadratic elements")
    nrm = x.norm()
    primes = set(factorint(abs(nrm.numerator))) | set(factorint(nrm.denominator)) | _candidate_primes(x)
    out = {}
    for p in sorted(primes):
        for P in primes_above(p, x.D):
            out[P] = valuation(x, P)
    return PrimeValuationMap(out)


def denominator_support(x: AnyNumber) -> PrimeValuationMap:
    """Primes with negative valuation and their exponents.

    Cyclotomic and composite elements are first pushed down to Q(sqrt D) by
    the relative norm, so the result lists primes of Q or Q(sqrt D).
    """
    if isinstance(x, CompositeNumber) and x.is_zero():
        return PrimeValuationMap()
    if isinstance(x, CompositeNumber) and not x.is_rational() and x.N != 1:
        if any(x.num0[1:]) or any(x.num1[1:]):
            x = relative_norm(x)
        else:
            x = simplify(QuadraticNumber(x.D, Fraction(x.num0[0], x.den), Fraction(x.num1[0], x.den))) \
                if x.D != 1 else Fraction(x.num0[0], x.den)
    if not isinstance(x, CompositeNumber):
        x = Fraction(x)
        if x == 0:
            return PrimeValuationMap()
        return PrimeValuationMap({PrimeIdeal(p): -e for p, e in factorint(x.denominator).items()})
    out = {}
    for p in sorted(_candidate_primes(x)):
        for P in primes_above(p, x.D):
            v = valuation(x, P)
            if v < 0:
                out[P] = v
    return PrimeValuationMap(out)


def odd_part(r) -> Fraction:
    """Strip the sign and every power of 2 from a nonzero rational."""
    r = Fraction(r)
    if r == 0:
        return r
    num, den = abs(r.numerator), r.denominator
    while num % 2 == 0:
        num //= 2
    while den % 2 == 0:
        den //= 2
    return Fraction(num, den)


# ---------------------------------------------------------------------------
# serialization


def format_rational(r) -> str:
    r = Fraction(r)
    return f"{r.numerator}/{r.denominator}"


def parse_rational(s: str) -> Fraction:
    if "/" in s:
        n, d = s.split("/")
        return Fraction(int(n), int(d))
    return Fraction(int(s))


def serialize(x: AnyNumber):
    """JSON-compatible form: "n/d" for rationals, lists for field elements."""
    if not isinstance(x, CompositeNumber):
        return format_rational(x)
    if x.D == 1:
        return ["cyc", x.N, [format_rational(c) for c in x.c0]]
    return ["comp", x.N, x.D, [format_rational(c) for c in x.c0], [format_rational(c) for c in x.c1]]


def deserialize(obj) -> AnyNumber:
    if isinstance(obj, str):
        return parse_rational(obj)
    if obj[0] == "cyc":
        return CyclotomicNumber(obj[1], [parse_rational(c) for c in obj[2]])
    if obj[0] == "comp":
        return CompositeNumber(obj[1], obj[2], [parse_rational(c) for c in obj[3]],
                               [parse_rational(c) for c in obj[4]])
    raise ValueError(f"unknown serialized form {obj!r}")
