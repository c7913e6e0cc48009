"""Nearly holomorphic expansions, the Maass-Shimura operator and holomorphic projection.

An expansion of depth r is stored as layers f_0, ..., f_r and stands for
sum_j f_j(q) R^j with R = 1/(4 pi y).  The level-one anchor computation
builds g * delta^(r) G, projects to its holomorphic part and reads off the
eigenform coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .bernoulli import partial_L
from .characters import DirichletCharacter, primitive_part, trivial_character
from .fields import AnyNumber, simplify
from .qexp import (ConditionError, Eigenform, InsufficientPrecisionError, QExpansion, aux_form_g,
                   check_conditions, default_precision, dim_S, eigenforms, eisenstein_level1, series_mul)


class ProjectionError(ValueError):
    """The weight is too small for the depth, so the projection does not converge."""


def _norm(x):
    return simplify(x) if not isinstance(x, (int, Fraction)) else x


@dataclass
class NearlyHolomorphicQExpansion:
    weight: int
    layers: list[list]

    def __post_init__(self):
        while len(self.layers) > 1 and all(c == 0 for c in self.layers[-1]):
            self.layers.pop()

    @property
    def depth(self) -> int:
        return len(self.layers) - 1

    @property
    def precision(self) -> int:
        return min(len(l) for l in self.layers)

    def layer(self, j: int) -> QExpansion:
        return QExpansion(self.weight - 2 * j, list(self.layers[j]))

    @classmethod
    def holomorphic(cls, f: QExpansion) -> "NearlyHolomorphicQExpansion":
        return cls(f.weight, [list(f.coeffs)])

    def __add__(self, other):
        if self.weight != other.weight:
            raise ValueError("weights differ")
        P = min(self.precision, other.precision)
        n = max(len(self.layers), len(other.layers))
        out = []
        for j in range(n):
            a = self.layers[j] if j < len(self.layers) else [0] * P
            b = other.layers[j] if j < len(other.layers) else [0] * P
            out.append([_norm(x + y) for x, y in zip(a[:P], b[:P])])
        return NearlyHolomorphicQExpansion(self.weight, out)

    def scale(self, c):
        return NearlyHolomorphicQExpansion(self.weight, [[_norm(c * x) if x else 0 for x in l] for l in self.layers])

    def __mul__(self, other):
        if isinstance(other, QExpansion):
            other = NearlyHolomorphicQExpansion.holomorphic(other)
        if not isinstance(other, NearlyHolomorphicQExpansion):
            return self.scale(other)
        P = min(self.precision, other.precision)
        out = [[0] * P for _ in range(self.depth + other.depth + 1)]
        for i, a in enumerate(self.layers):
            for j, b in enumerate(other.layers):
                prod = series_mul(a, b, P)
                out[i + j] = [_norm(x + y) for x, y in zip(out[i + j], prod)]
        return NearlyHolomorphicQExpansion(self.weight + other.weight, out)

    __rmul__ = __mul__

    def evaluate(self, z: complex, sqrt_sign: int = 1) -> complex:
        """Value of the real-analytic function at a point of the upper half plane."""
        from .fields import to_complex
        q = complex(math.e ** (-2 * math.pi * z.imag)) * complex(math.cos(2 * math.pi * z.real),
                                                                  math.sin(2 * math.pi * z.real))
        R = 1 / (4 * math.pi * z.imag)
        total = 0j
        for j, layer in enumerate(self.layers):
            s = 0j
            qn = 1 + 0j
            for c in layer:
                if c:
                    s += to_complex(c, sqrt_sign) * qn
                qn *= q
            total += s * R ** j
        return total


def maass_shimura_delta(lam: int, F: NearlyHolomorphicQExpansion) -> NearlyHolomorphicQExpansion:
    """delta_lam(c q^n R^j) = n c q^n R^j + (j - lam) c q^n R^(j+1)."""
    if F.weight != lam:
        raise ValueError(f"expected weight {lam}, got {F.weight}")
    P = F.precision
    out = [[0] * P for _ in range(F.depth + 2)]
    for j, layer in enumerate(F.layers):
        for n in range(P):
            c = layer[n]
            if not c:
                continue
            if n:
                out[j][n] = _norm(out[j][n] + n * c)
            if j != lam:
                out[j + 1][n] = _norm(out[j + 1][n] + (j - lam) * c)
    return NearlyHolomorphicQExpansion(lam + 2, out)


def iterated_delta(lam: int, r: int, F: NearlyHolomorphicQExpansion) -> NearlyHolomorphicQExpansion:
    out = F
    for i in range(r):
        out = maass_shimura_delta(lam + 2 * i, out)
    return out


@dataclass
class EisensteinGTilde:
    weight: int
    level: int
    omega: DirichletCharacter
    expansion: NearlyHolomorphicQExpansion

    @property
    def constant_term(self):
        return self.expansion.layers[0][0]


def _omega_at_level(omega: DirichletCharacter, N: int):
    def val(d: int):
        if math.gcd(d, N) > 1:
            return 0
        return omega(d % omega.modulus) if omega.modulus > 1 else 1
    return val


def _moebius_sum(N: int) -> int:
    # sum_{mu | N} moebius(mu), i.e. 1 if N = 1 else 0
    return 1 if N == 1 else 0


def eisenstein_gtilde(lam: int, N: int, omega: DirichletCharacter | None, P: int) -> EisensteinGTilde:
    """c0 + sum sigma^(omega)_{lam-1}(n) q^n with c0 = partial L-value / 2.

    For lam = 2 with trivial omega at level one the completed series is
    quasi-modular and carries the R-layer constant 1/2; at level N > 1 the
    completions of the divisor-sum pieces cancel and the series is holomorphic.
    """
    omega = omega or trivial_character()
    if N % omega.modulus and omega.modulus > 1:
        raise ValueError("modulus of omega must divide N")
    if omega.sign() != (-1) ** lam:
        raise ConditionError("parity", f"omega(-1) = {omega.sign()} but (-1)^lam = {(-1) ** lam}")
    if lam < 2:
        raise ValueError("lam must be at least 2")
    trivial = omega.is_trivial()
    val = _omega_at_level(omega, N)
    prim = primitive_part(omega) if omega.modulus > 1 else omega
    c0 = simplify(partial_L(prim, N, lam) * Fraction(1, 2))
    coeffs = [c0]
    for n in range(1, P):
        s = 0
        for d in range(1, n + 1):
            if n % d == 0:
                w = val(d)
                if w:
                    s = w * d ** (lam - 1) + s
        coeffs.append(_norm(s))
    layers = [coeffs]
    if lam == 2 and trivial:
        R = Fraction(_moebius_sum(N), 2)
        if R:
            layers.append([R] + [0] * (P - 1))
    return EisensteinGTilde(lam, N, omega, NearlyHolomorphicQExpansion(lam, layers))


def projection_factor(k: int, j: int) -> Fraction:
    """Gamma(k-1-j)/Gamma(k-1)."""
    out = Fraction(1)
    for t in range(k - 1 - j, k - 1):
        out /= t
    return out


def holomorphic_projection(F: NearlyHolomorphicQExpansion) -> QExpansion:
    """Depth-zero component h_0 of the decomposition sum_nu delta^(nu) h_nu.

    The coefficient rule kills every delta^(nu) h with nu >= 1; the constant
    term of h_0 is the constant term of the holomorphic layer, since the
    delta images of constants live only in positive depth.
    """
    k = F.weight
    r = F.depth
    if k <= 2 * r + 2:
        raise ProjectionError(f"weight {k} too small for depth {r}")
    P = F.precision
    facs = [projection_factor(k, j) for j in range(r + 1)]
    out = [F.layers[0][0]]
    for n in range(1, P):
        s = 0
        for j in range(r + 1):
            c = F.layers[j][n]
            if c:
                s = c * (facs[j] * n ** j) + s
        out.append(_norm(s))
    return QExpansion(k, out)


@dataclass
class AnchorResult:
    k: int
    l1: int
    l2: int
    values: dict
    alpha: AnyNumber
    h0: QExpansion
    precision: int


def anchor_value(k: int, l1: int, l2: int, P: int | None = None, full: bool = False):
    """Eigenform coefficients of the projected product g * delta^(r) G at level one.

    Returns {eigenform label: A_i}; with ``full`` the AnchorResult carrying
    the projected form and the Eisenstein multiple is returned instead.
    """
    triv = trivial_character()
    check_conditions(k, l1, l2, triv, triv, require_d3=True)
    d = dim_S(k)
    if d == 0:
        raise ValueError(f"S_{k} is zero")
    lam = -k + l1 + l2 + 1
    r = k - l1 - 1
    P = P or default_precision(k)
    g = aux_form_g(l1, l2, triv, triv, P, k=k)
    G = eisenstein_gtilde(lam, 1, triv, P).expansion
    H = iterated_delta(lam, r, G) * g
    h0 = holomorphic_projection(H)
    Gk = eisenstein_level1(k, P)
    alpha = Fraction(h0[0]) / Gk[0]
    rem = h0 - Gk.scale(alpha)
    forms = eigenforms(k, P)
    values = {}
    if d == 1:
        values[forms[0].label] = rem[1]
    else:
        f1, f2 = forms
        A1 = (rem[2] - rem[1] * f2.a(2)) / (f1.a(2) - f2.a(2))
        A2 = rem[1] - A1
        values[f1.label] = simplify(A1)
        values[f2.label] = simplify(A2)
    # the cuspidal remainder must be exactly the claimed combination
    for n in range(P):
        expect = 0
        for f in forms:
            expect = values[f.label] * f.a(n) + expect
        if simplify(expect - rem[n]) != 0:
            raise ArithmeticError(f"eigen-expansion fails at q^{n}")
    if full:
        return AnchorResult(k, l1, l2, values, alpha, h0, P)
    return values
