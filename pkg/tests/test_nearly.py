from __future__ import annotations

import math
from fractions import Fraction

import pytest

from critlab.characters import character_from_label, trivial_character
from critlab.fields import denominator_primes, odd_part
from critlab.nearly import (NearlyHolomorphicQExpansion, ProjectionError, anchor_value, eisenstein_gtilde,
                            holomorphic_projection, iterated_delta, maass_shimura_delta)
from critlab.qexp import ConditionError, QExpansion, eisenstein_level1, miller_basis

H = NearlyHolomorphicQExpansion


def const(weight, P=5):
    return H(weight, [[1] + [0] * (P - 1)])


def test_delta_examples():
    assert maass_shimura_delta(0, const(0)).layers == [[0] * 5]
    out = maass_shimura_delta(6, const(6))
    assert out.weight == 8 and out.layers == [[0] * 5, [-6, 0, 0, 0, 0]]
    q = H(6, [[0, 1, 0, 0]])
    assert maass_shimura_delta(6, q).layers == [[0, 1, 0, 0], [0, -6, 0, 0]]
    with pytest.raises(ValueError):
        maass_shimura_delta(4, q)


def test_iterated_delta():
    F = H(4, [[1, 2, 3, 0, 5]])
    assert iterated_delta(4, 0, F) == F
    assert iterated_delta(4, 1, F) == maass_shimura_delta(4, F)
    two = iterated_delta(4, 2, const(4))
    assert two == maass_shimura_delta(6, maass_shimura_delta(4, const(4)))
    # delta_6(-4R) = -4 (1 - 6) R^2
    assert two.layers == [[0] * 5, [0] * 5, [20, 0, 0, 0, 0]]
    for r in range(5):
        out = iterated_delta(4, r, F)
        assert out.weight == 4 + 2 * r and out.depth <= r


def _numeric_delta(F: H, lam: int, z: complex, h: float = 1e-5) -> complex:
    # delta_lam = (1/(2 pi i)) (d/dz + lam/(2 i y)), d/dz = (d/dx - i d/dy)/2
    dx = (F.evaluate(z + h) - F.evaluate(z - h)) / (2 * h)
    dy = (F.evaluate(z + 1j * h) - F.evaluate(z - 1j * h)) / (2 * h)
    dz = (dx - 1j * dy) / 2
    return (dz + lam / (2j * z.imag) * F.evaluate(z)) / (2j * math.pi)


def test_delta_layer_rule_matches_finite_difference():
    z = complex(0.1, 0.8)
    G4 = eisenstein_gtilde(4, 1, None, 40).expansion
    exact = maass_shimura_delta(4, G4).evaluate(z)
    approx = _numeric_delta(G4, 4, z)
    assert abs(exact - approx) <= 1e-6 * abs(exact)
    # a positive-depth input exercises the R^j part of the rule
    G2 = eisenstein_gtilde(2, 1, None, 40).expansion
    assert G2.depth == 1
    exact = maass_shimura_delta(2, G2).evaluate(z)
    assert abs(exact - _numeric_delta(G2, 2, z)) <= 1e-6 * abs(exact)


def test_gtilde_examples():
    G = eisenstein_gtilde(4, 1, None, 10)
    assert G.constant_term == Fraction(1, 240)
    assert G.expansion.layers[0][1] == 1 and G.expansion.depth == 0
    G2 = eisenstein_gtilde(2, 1, trivial_character(), 10).expansion
    assert G2.depth == 1 and G2.layers[1][0] == Fraction(1, 2)
    assert G2.layers[0][1:6] == [1, 3, 4, 7, 6]
    G3 = eisenstein_gtilde(3, 4, character_from_label("4:1"), 10).expansion
    assert G3.layers[0][2] == 1
    assert G3.layers[0][3] == 1 - 9
    with pytest.raises(ConditionError):
        eisenstein_gtilde(4, 4, character_from_label("4:1"), 10)


def test_gtilde_level_one_coefficients_in_factorial_lattice():
    P = 30
    for lam in range(4, 27, 2):
        G = eisenstein_gtilde(lam, 1, None, P).expansion
        for k in range(lam + 2, 29, 2):
            fk = math.factorial(k)
            assert all(Fraction(c * fk).denominator == 1 for c in G.layers[0]), (lam, k)
    # at lam = k the constant term can carry the prime k + 1 (von Staudt)
    G12 = eisenstein_gtilde(12, 1, None, 2).expansion
    assert Fraction(G12.layers[0][0] * math.factorial(12)).denominator == 13


def test_projection_examples():
    f = QExpansion(12, [0, 1, -24, 252])
    assert holomorphic_projection(H.holomorphic(f)).coeffs == f.coeffs
    qR = H(12, [[0, 0, 0], [0, 1, 0]])
    assert holomorphic_projection(qR)[1] == Fraction(1, 10)
    with pytest.raises(ProjectionError):
        holomorphic_projection(H(6, [[0, 1], [0, 1], [0, 1]]))


@pytest.mark.parametrize("k", [12, 16, 18])
def test_projection_of_delta_lies_on_eisenstein_line(k):
    P = 40
    # S_{k-2} is zero for k = 12, 16, so every Miller basis element of weight k-2 is used
    basis = miller_basis(k - 2, P)
    E = eisenstein_level1(k, P)
    for h in basis:
        out = holomorphic_projection(maass_shimura_delta(k - 2, H.holomorphic(h)))
        alpha = Fraction(out[0]) / E[0]
        assert out == E.scale(alpha)


@pytest.mark.parametrize("k", [12, 16, 18])
def test_projection_kills_delta_of_weight_k_minus_2_products(k):
    # delta_{k-2} of a product of two holomorphic forms projects onto the Eisenstein line too
    P = 40
    parts = miller_basis(4, P)[0] * miller_basis(k - 6, P)[0]
    out = holomorphic_projection(maass_shimura_delta(k - 2, H.holomorphic(parts)))
    E = eisenstein_level1(k, P)
    assert out == E.scale(Fraction(out[0]) / E[0])


def test_frozen_anchor_values():
    assert anchor_value(12, 11, 8) == {"12.0": Fraction(15, 2764)}
    assert anchor_value(12, 11, 6) == {"12.0": Fraction(-3, 691)}
    assert anchor_value(16, 15, 2) == {"16.0": Fraction(-1404, 25319)}


def test_anchor_denominators_within_bound():
    # odd primes in the denominator lie in supp zeta(-11) * (12!)^2
    for l1, l2 in ((11, 8), (11, 6), (11, 4), (9, 6), (10, 7)):
        val = anchor_value(12, l1, l2)["12.0"]
        assert denominator_primes(val) - {2} <= {3, 5, 7, 11, 691}, (l1, l2)


def test_anchor_ratio_independent_of_constant():
    a = anchor_value(12, 11, 8)["12.0"]
    b = anchor_value(12, 11, 6)["12.0"]
    assert odd_part(a / b) == odd_part(Fraction(15, 2764) / Fraction(-3, 691))


def test_anchor_eisenstein_part_removed_exactly():
    res = anchor_value(24, 23, 20, full=True)
    assert set(res.values) == {"24.0", "24.1"}
    assert res.values["24.0"] == res.values["24.1"].conjugate()


def test_anchor_conditions():
    with pytest.raises(ConditionError):
        anchor_value(12, 11, 7)
    with pytest.raises(ConditionError):
        anchor_value(12, 11, 10)
    with pytest.raises(ConditionError):
        anchor_value(12, 11, 1)
