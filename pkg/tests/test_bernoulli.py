from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest

from critlab.bernoulli import (bernoulli, bernoulli_poly, carlitz_leopoldt_check, clausen_von_staudt_check,
                               dirichlet_L_nonpositive, generalized_bernoulli, partial_L, zeta_nonpositive)
from critlab.characters import NotPrimitiveError, character_from_label, primitive_characters, trivial_character
from critlab.fields import to_complex


def test_bernoulli_numbers():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(3) == 0
    assert bernoulli(12) == Fraction(-691, 2730)
    assert bernoulli_poly(2, Fraction(1, 2)) == Fraction(-1, 12)


def test_generalized_examples():
    odd4 = character_from_label("4:1")
    one = trivial_character()
    assert generalized_bernoulli(1, odd4) == Fraction(-1, 2)
    assert generalized_bernoulli(2, one) == Fraction(1, 6)
    assert generalized_bernoulli(2, odd4) == 0
    with pytest.raises(NotPrimitiveError):
        generalized_bernoulli(2, character_from_label("6:1"))


def test_trivial_character_matches_bernoulli():
    one = trivial_character()
    assert generalized_bernoulli(1, one) == Fraction(1, 2)
    for m in range(2, 30):
        assert generalized_bernoulli(m, one) == bernoulli(m)


def test_l_values():
    assert zeta_nonpositive(12) == Fraction(691, 32760)
    assert zeta_nonpositive(1) == Fraction(-1, 2)
    assert dirichlet_L_nonpositive(1, character_from_label("4:1")) == Fraction(1, 2)


def test_partial_l():
    one = trivial_character()
    z = Fraction(691, 32760)
    assert partial_L(one, 1, 12) == z
    assert partial_L(one, 2, 12) == z * (1 - 2 ** 11)
    chi = character_from_label("5:1")
    assert partial_L(chi, 5, 3) == dirichlet_L_nonpositive(3, chi)
    with pytest.raises(ValueError):
        partial_L(chi, 6, 3)


def test_clausen_von_staudt():
    assert bernoulli(12).denominator == 2730
    for m in range(2, 61, 2):
        assert clausen_von_staudt_check(m), m


def test_carlitz_leopoldt():
    assert carlitz_leopoldt_check(character_from_label("4:1"), 1)
    assert carlitz_leopoldt_check(character_from_label("3:1"), 2)
    for chi in primitive_characters(20):
        if chi.modulus == 1:
            continue
        for m in range(1, 13):
            assert carlitz_leopoldt_check(chi, m), (chi.label, m)


def _hurwitz_L(m: int, chi) -> complex:
    # L(s, chi) = N^-s sum_a chi(a) zeta(s, a/N) at s = 1 - m
    N = chi.modulus
    s = 1 - m
    total = mpmath.mpc(0)
    for a in range(1, N + 1):
        t = chi.value_fraction(a)
        if t is None:
            continue
        total += mpmath.expjpi(2 * t.numerator / mpmath.mpf(t.denominator)) * mpmath.zeta(s, mpmath.mpf(a) / N)
    return complex(total * mpmath.power(N, -s))


def test_matches_hurwitz_zeta():
    with mpmath.workdps(30):
        for chi in primitive_characters(8):
            for m in range(1, 9):
                exact = to_complex(dirichlet_L_nonpositive(m, chi))
                approx = _hurwitz_L(m, chi)
                assert abs(exact - approx) <= 1e-9 * max(1.0, abs(approx)), (chi.label, m)
