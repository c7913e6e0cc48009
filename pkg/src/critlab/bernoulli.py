"""Bernoulli numbers, generalized Bernoulli numbers and L-values at non-positive integers."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from sympy import factorint, primefactors

from .characters import DirichletCharacter, NotPrimitiveError, trivial_character
from .fields import AnyNumber, denominator_primes, simplify


@lru_cache(maxsize=None)
def _bernoulli_list(m: int) -> tuple[Fraction, ...]:
    # sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1
    B = [Fraction(1)]
    for n in range(1, m + 1):
        s = sum(math.comb(n + 1, j) * B[j] for j in range(n))
        B.append(-s / (n + 1))
    return tuple(B)


def bernoulli(m: int) -> Fraction:
    """B_m with B_1 = -1/2."""
    if m < 0:
        raise ValueError("m must be non-negative")
    if m >= 3 and m % 2:
        return Fraction(0)
    return _bernoulli_list(m)[m]


def bernoulli_poly(m: int, x) -> Fraction:
    """B_m(x) = sum_j C(m, j) B_j x^(m-j)."""
    x = Fraction(x)
    return sum((math.comb(m, j) * bernoulli(j) * x ** (m - j) for j in range(m + 1)), Fraction(0))


_GEN_CACHE: dict = {}


def generalized_bernoulli(m: int, chi: DirichletCharacter) -> AnyNumber:
    """B_{m,chi} = N^(m-1) sum_{a=1}^{N} chi(a) B_m(a/N) for primitive chi mod N."""
    if m < 1:
        raise ValueError("m must be positive")
    if not chi.is_primitive():
        raise NotPrimitiveError(f"{chi.label} is not primitive")
    key = (m, chi.modulus, chi.exponents)
    if key in _GEN_CACHE:
        return _GEN_CACHE[key]
    N = chi.modulus
    if (m - chi.parity) % 2 and not (m == 1 and N == 1):
        out = Fraction(0)
    else:
        total = Fraction(0)
        for a in range(1, N + 1):
            v = chi(a)
            if v == 0:
                continue
            total = v * bernoulli_poly(m, Fraction(a, N)) + total
        out = simplify(total * Fraction(N) ** (m - 1))
    _GEN_CACHE[key] = out
    return out


def dirichlet_L_nonpositive(m: int, chi: DirichletCharacter) -> AnyNumber:
    """L(1-m, chi) = -B_{m,chi}/m."""
    return simplify(generalized_bernoulli(m, chi) * Fraction(-1, m))


def zeta_nonpositive(m: int) -> Fraction:
    """zeta(1-m)."""
    return Fraction(dirichlet_L_nonpositive(m, trivial_character()))


def partial_L(chi: DirichletCharacter, N: int, m: int) -> AnyNumber:
    """L(1-m, chi) * prod_{p | N} (1 - p^(m-1) chi(p))."""
    if N % chi.conductor:
        raise ValueError(f"conductor {chi.conductor} does not divide {N}")
    out = dirichlet_L_nonpositive(m, chi)
    for p in primefactors(N):
        out = out * (1 - Fraction(p) ** (m - 1) * chi(p))
    return simplify(out)


def clausen_von_staudt_check(m: int) -> bool:
    """denominator(B_m) equals the product of primes p with (p-1) | m."""
    if m < 2 or m % 2:
        raise ValueError("m must be even and at least 2")
    expected = 1
    for d in range(1, m + 1):
        if m % d == 0 and _is_prime(d + 1):
            expected *= d + 1
    return bernoulli(m).denominator == expected


def _is_prime(n: int) -> bool:
    return n >= 2 and factorint(n) == {n: 1}


def carlitz_leopoldt_check(chi: DirichletCharacter, m: int) -> bool:
    """N * m * L(1-m, conj chi) has no denominator."""
    if not chi.is_primitive() or chi.modulus == 1:
        raise ValueError("chi must be primitive of conductor > 1")
    val = dirichlet_L_nonpositive(m, chi.conj()) * (chi.modulus * m)
    return not denominator_primes(val)
