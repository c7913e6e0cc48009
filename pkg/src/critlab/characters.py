"""Dirichlet characters, Gauss sums, Kronecker characters and local square classes.

A character mod N is recorded by its exponents on the canonical generators of
(Z/N)^x: the CRT components ordered by prime, a primitive root for odd prime
powers, -1 for 4, and the pair (-1, 5) for 2^e with e >= 3.  Exponent e_i on a
generator of order n_i means chi(g_i) = exp(2 pi i e_i / n_i).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from sympy import factorint, primitive_root
from sympy.functions.combinatorial.numbers import kronecker_symbol, legendre_symbol

from .fields import CompositeNumber, CyclotomicNumber, from_exponent_counts, lift, squarefree_part, zeta


class NotPrimitiveError(ValueError):
    pass


class NotDiscriminantError(ValueError):
    pass


@lru_cache(maxsize=None)
def unit_generators(N: int) -> tuple[tuple[int, int, int, int], ...]:
    """Canonical generators as tuples (generator mod N, order, prime, prime power)."""
    gens = []
    for p, e in sorted(factorint(N).items()):
        q = p ** e
        other = N // q
        local = []
        if p == 2:
            if e == 2:
                local.append((q - 1, 2))
            elif e >= 3:
                local.append((q - 1, 2))
                local.append((5, q // 4))
        else:
            local.append((int(primitive_root(q)), q // p * (p - 1)))
        for g, order in local:
            # CRT: g mod q, 1 mod other
            if other == 1:
                lifted = g % N
            else:
                lifted = (g * other * pow(other, -1, q) + q * pow(q, -1, other)) % N
            gens.append((lifted, order, p, q))
    return tuple(gens)


@lru_cache(maxsize=None)
def _discrete_log_tables(N: int):
    """For each generator, the map (residue mod prime power) -> exponent."""
    per_prime = {}
    for idx, (g, order, p, q) in enumerate(unit_generators(N)):
        per_prime.setdefault(q, []).append((idx, g % q, order))
    logs = {}
    for q, items in per_prime.items():
        table = {}
        orders = [o for _, _, o in items]
        for exps in itertools.product(*[range(o) for o in orders]):
            val = 1
            for (idx, g, o), e in zip(items, exps):
                val = val * pow(g, e, q) % q
            table[val] = exps
        logs[q] = (items, table)
    return logs


def unit_log(a: int, N: int) -> tuple[int, ...] | None:
    """Exponents of a on the canonical generators, or None if gcd(a, N) > 1."""
    if math.gcd(a, N) != 1:
        return None
    out = [0] * len(unit_generators(N))
    for q, (items, table) in _discrete_log_tables(N).items():
        exps = table[a % q]
        for (idx, _, _), e in zip(items, exps):
            out[idx] = e
    return tuple(out)


@dataclass(frozen=True)
class DirichletCharacter:
    """Character mod ``modulus`` with value exp(2 pi i e_i / n_i) on generator i."""

    modulus: int
    exponents: tuple[int, ...]
    index: int = field(default=-1, compare=False)

    @property
    def generator_orders(self) -> tuple[int, ...]:
        return tuple(o for _, o, _, _ in unit_generators(self.modulus))

    @property
    def order(self) -> int:
        out = 1
        for e, n in zip(self.exponents, self.generator_orders):
            m = n // math.gcd(e, n)
            out = out * m // math.gcd(out, m)
        return out

    @property
    def label(self) -> str:
        return f"{self.modulus}:{self.index}"

    def value_fraction(self, a: int) -> Fraction | None:
        """chi(a) as a fraction t of a full turn (chi(a) = exp(2 pi i t)), None if chi(a) = 0."""
        log = unit_log(a % self.modulus, self.modulus)
        if log is None:
            return None
        t = sum(Fraction(e * l, n) for e, l, n in zip(self.exponents, log, self.generator_orders))
        return t - math.floor(t)

    def value_exponent(self, a: int) -> int | None:
        """chi(a) = zeta_order^v; returns v or None when chi(a) = 0."""
        t = self.value_fraction(a)
        if t is None:
            return None
        v = t * self.order
        assert v.denominator == 1
        return int(v)

    def __call__(self, a: int):
        """chi(a) as an exact element of Q(zeta_order) (0 off the units)."""
        v = self.value_exponent(a)
        if v is None:
            return Fraction(0)
        o = self.order
        if o <= 2:
            return Fraction(1 if v == 0 else -1)
        return zeta(o, v)

    def value_in(self, a: int, M: int):
        """chi(a) in Q(zeta_M); M must be a multiple of the order."""
        v = self.value_exponent(a)
        if v is None:
            return Fraction(0)
        if M % self.order:
            raise ValueError("target field does not contain the character values")
        j = v * (M // self.order)
        if j % M == 0:
            return Fraction(1)
        if 2 * j % M == 0:
            return Fraction(-1)
        return zeta(M, j)

    def is_principal(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def is_trivial(self) -> bool:
        return self.modulus == 1

    @property
    def parity(self) -> int:
        """0 for even characters, 1 for odd ones."""
        if self.modulus <= 2:
            return 0
        return 0 if self.value_exponent(self.modulus - 1) == 0 else 1

    def sign(self) -> int:
        return -1 if self.parity else 1

    @property
    def conductor(self) -> int:
        return _conductor(self.modulus, self.exponents)

    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def conj(self) -> "DirichletCharacter":
        ex = tuple((-e) % n for e, n in zip(self.exponents, self.generator_orders))
        return character_from_exponents(self.modulus, ex)

    def real_values(self) -> bool:
        return self.order <= 2

    def __repr__(self):
        return f"DirichletCharacter({self.label}, order={self.order}, conductor={self.conductor})"


def _index_of(N: int, exponents: tuple[int, ...]) -> int:
    idx = 0
    for e, (_, n, _, _) in zip(exponents, unit_generators(N)):
        idx = idx * n + e
    return idx


def character_from_exponents(N: int, exponents) -> DirichletCharacter:
    exponents = tuple(int(e) % n for e, (_, n, _, _) in zip(exponents, unit_generators(N)))
    return DirichletCharacter(N, exponents, _index_of(N, exponents))


def enumerate_characters(N: int) -> list[DirichletCharacter]:
    """All characters mod N in lexicographic order of their exponent tuples."""
    orders = [n for _, n, _, _ in unit_generators(N)]
    return [DirichletCharacter(N, tuple(ex), i)
            for i, ex in enumerate(itertools.product(*[range(n) for n in orders]))]


def character_from_label(label: str) -> DirichletCharacter:
    try:
        n_str, j_str = label.split(":")
        N, j = int(n_str), int(j_str)
    except ValueError:
        raise ValueError(f"character label must look like N:j, got {label!r}") from None
    chars = enumerate_characters(N)
    if not 0 <= j < len(chars):
        raise ValueError(f"index {j} out of range for modulus {N}")
    return chars[j]


def character_from_function(N: int, value_fraction) -> DirichletCharacter:
    """Build the character mod N whose value on a unit a is exp(2 pi i value_fraction(a))."""
    ex = []
    for g, n, _, _ in unit_generators(N):
        t = Fraction(value_fraction(g)) * n
        if t.denominator != 1:
            raise ValueError("values are not those of a character mod N")
        ex.append(int(t) % n)
    chi = character_from_exponents(N, ex)
    return chi


@lru_cache(maxsize=None)
def _conductor(N: int, exponents: tuple[int, ...]) -> int:
    chi = DirichletCharacter(N, exponents)
    for d in sorted(x for x in range(1, N + 1) if N % x == 0):
        ok = True
        for a in range(1, N, d):
            if math.gcd(a, N) == 1 and chi.value_fraction(a) != 0:
                ok = False
                break
        if ok:
            return d
    return N


def induce(chi: DirichletCharacter, M: int) -> DirichletCharacter:
    """The character mod M (a multiple of the modulus) induced by chi."""
    if M % chi.modulus:
        raise ValueError("modulus must divide the new modulus")
    return character_from_function(M, lambda a: chi.value_fraction(a % chi.modulus))


def primitive_part(chi: DirichletCharacter) -> DirichletCharacter:
    """The primitive character inducing chi."""
    f = chi.conductor
    N = chi.modulus

    def val(a):
        # lift a unit mod f to a unit mod N
        b = a
        while math.gcd(b, N) != 1:
            b += f
        return chi.value_fraction(b)

    return character_from_function(f, val)


def multiply(chi1: DirichletCharacter, chi2: DirichletCharacter) -> DirichletCharacter:
    """The product character modulo lcm of the moduli."""
    M = chi1.modulus * chi2.modulus // math.gcd(chi1.modulus, chi2.modulus)
    return character_from_function(M, lambda a: chi1.value_fraction(a % chi1.modulus)
                                   + chi2.value_fraction(a % chi2.modulus))


def trivial_character() -> DirichletCharacter:
    return enumerate_characters(1)[0]


def primitive_characters(max_conductor: int) -> list[DirichletCharacter]:
    out = []
    for N in range(1, max_conductor + 1):
        if N % 4 == 2:
            continue
        out.extend(c for c in enumerate_characters(N) if c.is_primitive())
    return out


# ---------------------------------------------------------------------------
# Gauss sums


def gauss_sum(chi: DirichletCharacter) -> CyclotomicNumber:
    """tau(chi) = sum_a chi(a) zeta_N^a in Q(zeta_lcm(N, order))."""
    if not chi.is_primitive():
        raise NotPrimitiveError(f"{chi.label} is not primitive (conductor {chi.conductor})")
    N, o = chi.modulus, chi.order
    L = N * o // math.gcd(N, o)
    counts: dict[int, int] = {}
    for a in range(N):
        v = chi.value_exponent(a)
        if v is None:
            continue
        j = (a * (L // N) + v * (L // o)) % L
        counts[j] = counts.get(j, 0) + 1
    return from_exponent_counts(L, counts)


@dataclass(frozen=True)
class KroneckerCharacter:
    """The character (d/.) of a fundamental discriminant d."""

    disc: int

    def __post_init__(self):
        d, f = fundamental_discriminant(self.disc)
        if f != 1:
            raise NotDiscriminantError(f"{self.disc} is not a fundamental discriminant")

    def __call__(self, a: int) -> int:
        return int(kronecker_symbol(self.disc, a))

    def as_dirichlet(self) -> DirichletCharacter:
        N = abs(self.disc)
        return character_from_function(N, lambda a: Fraction(0) if self(a) == 1 else Fraction(1, 2))


def gauss_sum_product_identity(phi: DirichletCharacter, chi_B: KroneckerCharacter):
    """tau(phi*chi_B) evaluated directly and via phi(|d|) chi_B(N) tau(phi) tau(chi_B).

    Returns the common value; raises if the two routes disagree.
    """
    if not phi.is_primitive():
        raise NotPrimitiveError("phi must be primitive")
    kd = chi_B.as_dirichlet()
    N, dd = phi.modulus, kd.modulus
    if math.gcd(N, dd) != 1:
        raise ValueError("conductors of phi and chi_B must be coprime")
    direct = gauss_sum(multiply(phi, kd))
    via = gauss_sum(phi) * gauss_sum(kd) * phi(dd) * chi_B(N)
    if direct != via:
        raise ArithmeticError("Gauss sum product identity failed")
    return direct


# ---------------------------------------------------------------------------
# discriminants and local square classes


def is_fundamental(d: int) -> bool:
    if d == 1:
        return True
    if d % 4 == 1:
        return squarefree_part(d) == d
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and squarefree_part(m) == m
    return False


def fundamental_discriminant(d: int) -> tuple[int, int]:
    """Split a discriminant d as (fundamental discriminant, conductor) with d = D f^2."""
    if d == 0 or d % 4 not in (0, 1):
        raise NotDiscriminantError(f"{d} is not congruent to 0 or 1 mod 4")
    s = squarefree_part(d)
    D = s if s % 4 == 1 else 4 * s
    f2 = d // D
    f = math.isqrt(f2)
    if f * f != f2 or D * f2 != d:
        raise ArithmeticError("inconsistent discriminant factorization")
    return D, f


def chi_p(a, p: int) -> int:
    """+1, -1 or 0 as Q_p(sqrt a) is trivial, unramified quadratic or ramified."""
    a = Fraction(a)
    if a == 0:
        raise ValueError("a must be nonzero")
    num, den = a.numerator, a.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    if v % 2:
        return 0
    u = num * den  # same square class as num/den
    if p == 2:
        r = u % 8
        if r == 1:
            return 1
        if r == 5:
            return -1
        return 0
    return int(legendre_symbol(u % p, p))
