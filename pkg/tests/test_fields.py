from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from critlab.fields import (CompositeNumber, CyclotomicNumber, IncompatibleFieldsError, InvalidPrimeError,
                            PrimeIdeal, QuadraticNumber, denominator_support, deserialize, field_inv,
                            field_mul, primes_above, serialize, simplify, valuation, zeta)

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=30)


@st.composite
def cyclotomic(draw, N=12):
    from critlab.fields import euler_phi
    return CyclotomicNumber(N, [draw(fractions) for _ in range(euler_phi(N))])


@st.composite
def quadratic(draw, D=5):
    return QuadraticNumber(D, draw(fractions), draw(fractions))


def test_zeta4_squared():
    assert simplify(field_mul(zeta(4), zeta(4))) == -1


def test_one_plus_zeta3_times_conjugate():
    z = zeta(3)
    assert simplify(field_mul(1 + z, 1 + z * z)) == 1


def test_quadratic_conjugate_product():
    a, b, D = Fraction(3), Fraction(2), 7
    x = QuadraticNumber(D, a, b)
    assert simplify(field_mul(x, x.conjugate())) == a * a - D * b * b


def test_mul_rejects_different_fields():
    with pytest.raises(IncompatibleFieldsError):
        field_mul(zeta(4), zeta(3))


def test_inverse_examples():
    assert simplify(field_inv(CyclotomicNumber(4, [1, 0]))) == 1
    assert field_inv(zeta(4)) == -zeta(4)
    assert field_inv(QuadraticNumber(5, 1, 1)) == QuadraticNumber(5, Fraction(-1, 4), Fraction(1, 4))
    with pytest.raises(ZeroDivisionError):
        field_inv(CyclotomicNumber(5, [0, 0, 0, 0]))


def test_valuation_examples():
    assert valuation(Fraction(3, 8), 2) == -3
    assert valuation(0, 2) == math.inf
    P5 = primes_above(5, 5)[0]
    assert P5.tag == "ramified"
    assert valuation(QuadraticNumber(5, 0, 1), P5) == 1
    assert valuation(Fraction(5), P5) == 2


def test_valuation_rejects_wrong_descriptor():
    with pytest.raises(InvalidPrimeError):
        valuation(QuadraticNumber(5, 0, 1), PrimeIdeal(5, 5, "split", 0))
    with pytest.raises(InvalidPrimeError):
        valuation(QuadraticNumber(5, 0, 1), PrimeIdeal(3, 7, "inert"))


def test_denominator_support_examples():
    d = denominator_support(Fraction(691, 32760))
    assert {P.p: e for P, e in d.items()} == {2: -3, 3: -2, 5: -1, 7: -1, 13: -1}
    assert not denominator_support(Fraction(1))
    # (1 + sqrt 5)/2 is a unit, so (1 + sqrt 5)/4 has order -1 at the inert prime 2;
    # its norm -1/4 carries the -2 because the residue degree is 2
    x = QuadraticNumber(5, Fraction(1, 4), Fraction(1, 4))
    d = denominator_support(x)
    assert [(P.p, P.tag, e) for P, e in d.items()] == [(2, "inert", -1)]
    assert x.norm() == Fraction(-1, 4)


def test_decomposition_degree_sums_to_two():
    for D in (5, -3, 13, 2, -1, 144169):
        for p in (2, 3, 5, 7, 11, 13):
            tags = [P.tag for P in primes_above(p, D)]
            total = sum(2 if t in ("inert", "ramified") else 1 for t in tags)
            assert total == 2, (D, p, tags)


@settings(max_examples=60, deadline=None)
@given(cyclotomic())
def test_self_difference_is_canonical_zero(x):
    d = x - x
    assert d.is_zero() and not any(d.num0)


@settings(max_examples=60, deadline=None)
@given(cyclotomic(), cyclotomic())
def test_inverse_and_distributivity(x, y):
    if not x.is_zero():
        assert simplify(x * field_inv(x)) == 1
    assert x * (y + 1) == x * y + x


@settings(max_examples=80, deadline=None)
@given(quadratic(), quadratic(), st.sampled_from([2, 3, 5, 11, 19]))
def test_valuation_is_additive_and_ultrametric(x, y, p):
    if x.is_zero() or y.is_zero():
        return
    for P in primes_above(p, 5):
        vx, vy = valuation(x, P), valuation(y, P)
        assert valuation(x * y, P) == vx + vy
        s = x + y
        vs = valuation(s, P)
        assert vs >= min(vx, vy)
        if vx != vy:
            assert vs == min(vx, vy)


@settings(max_examples=40, deadline=None)
@given(cyclotomic(), quadratic(D=-3))
def test_serialization_round_trip(x, q):
    assert deserialize(serialize(x)) == x
    comp = CompositeNumber(12, 5, [1, 0, 0, 0], [0, 1, 0, 0]) * (QuadraticNumber(5, q.a, q.b) + 1)
    back = deserialize(serialize(comp))
    assert back == comp and serialize(back) == serialize(comp)
    assert deserialize(serialize(Fraction(-7, 3))) == Fraction(-7, 3)


def test_split_roots_match_brute_force():
    from sympy import primerange
    from critlab.fields import _omega_minpoly
    for D in (5, -3, 13, 2, -1, -7, 17, 144169):
        t, c = _omega_minpoly(D)
        for p in primerange(2, 300):
            roots = [P.root for P in primes_above(p, D) if P.tag == "split"]
            if roots:
                assert roots == sorted(r for r in range(p) if (r * r - t * r - c) % p == 0)
