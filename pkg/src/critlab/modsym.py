"""Level-one modular symbols and exact critical values of twisted L-functions.

Homogeneous polynomials P(X, Y) of degree w = k-2 are stored as coefficient
lists indexed by the power of X.  The symbol P{a, b} stands for the integral
of f(z) P(z, 1) dz from a to b, and a matrix g acts by
(P o g)(X, Y) = P(aX + bY, cX + dY), so that P{g0, g oo} = (P o g){0, oo}.
An eigenform determines two exact functionals phi^+ and phi^- on the
symbols; the transcendental parts are two periods omega_+ and omega_-.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath

from .characters import DirichletCharacter, NotPrimitiveError, gauss_sum, multiply, primitive_part
from .fields import AnyNumber, CompositeNumber, QuadraticNumber, simplify, to_complex, zeta
from .linalg import nullspace, rank
from .qexp import (ConditionError, Eigenform, InsufficientPrecisionError, UnsupportedDimensionError,
                   check_conditions, dim_S, eigenforms)

S_MAT = (0, -1, 1, 0)
U_MAT = (1, -1, 1, 0)


def _norm(x):
    return x if isinstance(x, (int, Fraction)) else simplify(x)


@lru_cache(maxsize=None)
def _binom_row(e: int) -> tuple[int, ...]:
    return tuple(math.comb(e, i) for i in range(e + 1))


def _linear_power(a, b, e: int) -> list:
    # (aX + bY)^e as coefficients of X^i Y^(e-i)
    row = _binom_row(e)
    return [row[i] * Fraction(a) ** i * Fraction(b) ** (e - i) for i in range(e + 1)]


def _poly_mul(p: list, q: list) -> list:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if x:
            for j, y in enumerate(q):
                if y:
                    out[i + j] += x * y
    return out


@lru_cache(maxsize=4096)
def action_matrix(w: int, g: tuple) -> tuple[tuple[Fraction, ...], ...]:
    """Columns give (X^i Y^(w-i)) o g; returns M with coeffs(P o g) = M coeffs(P)."""
    a, b, c, d = g
    cols = []
    for i in range(w + 1):
        cols.append(_poly_mul(_linear_power(a, b, i), _linear_power(c, d, w - i)))
    return tuple(tuple(cols[j][i] for j in range(w + 1)) for i in range(w + 1))


def act(P: list, g: tuple) -> list:
    w = len(P) - 1
    M = action_matrix(w, g)
    return [sum((M[i][j] * P[j] for j in range(w + 1) if P[j]), Fraction(0)) for i in range(w + 1)]


def _mat_mul(g: tuple, h: tuple) -> tuple:
    a, b, c, d = g
    e, f, gg, hh = h
    return (a * e + b * gg, a * f + b * hh, c * e + d * gg, c * f + d * hh)


@lru_cache(maxsize=None)
def heilbronn(n: int) -> tuple[tuple[int, int, int, int], ...]:
    """{(a b; c d): ad - bc = n, a > b >= 0, d > c >= 0}."""
    out = []
    for a in range(1, n + 1):
        for d in range(1, n + 1):
            for b in range(a):
                for c in range(d):
                    if a * d - b * c == n:
                        out.append((a, b, c, d))
    return tuple(out)


@lru_cache(maxsize=None)
def hecke_matrix(w: int, n: int) -> tuple[tuple[Fraction, ...], ...]:
    """Matrix of P -> sum over Heilbronn matrices M of P o M."""
    tot = [[Fraction(0)] * (w + 1) for _ in range(w + 1)]
    for g in heilbronn(n):
        M = action_matrix(w, g)
        for i in range(w + 1):
            for j in range(w + 1):
                tot[i][j] += M[i][j]
    return tuple(tuple(r) for r in tot)


def _functional_rows(w: int) -> list[list[Fraction]]:
    # phi must vanish on P + P|S and P + P|U + P|U^2 for every monomial P
    MS = action_matrix(w, S_MAT)
    MU = action_matrix(w, U_MAT)
    MU2 = action_matrix(w, _mat_mul(U_MAT, U_MAT))
    rows = []
    for j in range(w + 1):
        rows.append([Fraction(int(i == j)) + MS[i][j] for i in range(w + 1)])
        rows.append([Fraction(int(i == j)) + MU[i][j] + MU2[i][j] for i in range(w + 1)])
    return rows


@dataclass
class PeriodPolynomialSpace:
    """Functionals on weight-k Manin symbols that respect the level-one relations."""

    weight: int
    relation_rows: list
    functionals: list
    hecke: dict = field(default_factory=dict)

    @property
    def w(self) -> int:
        return self.weight - 2

    @property
    def dimension(self) -> int:
        return len(self.functionals)

    @property
    def cuspidal_dimension(self) -> int:
        return self.dimension - 1

    def hecke_on_functionals(self, n: int) -> list[list]:
        """Matrix A with (phi_i o T_n) = sum_j A[i][j] phi_j in the functional basis."""
        T = hecke_matrix(self.w, n)
        basis = self.functionals
        images = [[sum((phi[i] * T[i][j] for i in range(self.w + 1) if phi[i]), Fraction(0))
                   for j in range(self.w + 1)] for phi in basis]
        return [_coordinates(im, basis) for im in images]


def _coordinates(v: list, basis: list) -> list:
    # solve v = sum c_i basis_i exactly
    n = len(basis)
    rows = [[basis[i][j] for i in range(n)] + [-v[j]] for j in range(len(v))]
    ns = nullspace(rows)
    for vec in ns:
        if vec[-1] != 0:
            return [_norm(x / vec[-1]) for x in vec[:-1]]
    raise ValueError("vector not in span")


_SPACES: dict[int, PeriodPolynomialSpace] = {}


def build_space(k: int) -> PeriodPolynomialSpace:
    if k % 2 or k < 2:
        raise ValueError("k must be even and positive")
    if dim_S(k) > 2:
        raise UnsupportedDimensionError(f"dim S_{k} = {dim_S(k)} > 2 is not supported")
    if k in _SPACES:
        return _SPACES[k]
    w = k - 2
    rows = _functional_rows(w)
    funcs = nullspace(rows)
    sp = PeriodPolynomialSpace(k, rows, funcs)
    for n in (2, 3):
        sp.hecke[n] = sp.hecke_on_functionals(n)
    _SPACES[k] = sp
    return sp


def hecke_eigenvalues_ok(k: int) -> bool:
    """Each eigenform eigenvalue of T(2), T(3) is a root of the char poly on the symbols."""
    sp = build_space(k)
    for n in (2, 3):
        A = sp.hecke[n]
        for f in eigenforms(k):
            lam = f.a(n)
            M = [[_norm(A[i][j] - (lam if i == j else 0)) for j in range(len(A))] for i in range(len(A))]
            if rank(M) != len(A) - 2:
                return False
        eis = 1 + n ** (k - 1)
        M = [[A[i][j] - (eis if i == j else 0) for j in range(len(A))] for i in range(len(A))]
        if rank(M) != len(A) - 1:
            return False
    return True


@dataclass
class EigenSymbol:
    """phi^+ and phi^- for one eigenform, normalized on X^(k-2) and X^(k-3) Y."""

    form: Eigenform
    plus: list
    minus: list

    def __call__(self, eps: int, P: list):
        phi = self.plus if eps > 0 else self.minus
        s = 0
        for a, b in zip(phi, P):
            if a != 0 and b != 0:
                s = a * b + s
        return _norm(s)


_EIGEN_SYMBOLS: dict[tuple[int, int], EigenSymbol] = {}


def eigen_symbol(f: Eigenform) -> EigenSymbol:
    key = (f.weight, f.index)
    if key in _EIGEN_SYMBOLS:
        return _EIGEN_SYMBOLS[key]
    k = f.weight
    w = k - 2
    T = hecke_matrix(w, 2)
    lam = f.a(2)
    base = _functional_rows(w)
    hecke_rows = [[_norm(T[i][j] - (lam if i == j else 0)) for i in range(w + 1)] for j in range(w + 1)]
    out = {}
    for eps in (1, -1):
        parity_rows = [[Fraction(int(i == j)) for i in range(w + 1)] for j in range(w + 1)
                       if (-1) ** j != eps]
        ns = nullspace(base + hecke_rows + parity_rows, w + 1)
        if len(ns) != 1:
            raise ArithmeticError(f"eigen-functional space of dimension {len(ns)} for eps={eps}")
        v = ns[0]
        anchor = w if eps > 0 else w - 1
        if v[anchor] == 0:
            raise ArithmeticError("normalizing coordinate vanishes")
        inv = 1 / v[anchor]
        out[eps] = [_norm(x * inv) for x in v]
    sym = EigenSymbol(f, out[1], out[-1])
    _EIGEN_SYMBOLS[key] = sym
    return sym


# ---------------------------------------------------------------------------
# paths to cusps


def _convergents(a: int, b: int) -> list[tuple[int, int]]:
    """Cusps 0/1, 1/0, p_0/q_0, ..., a/b of the continued fraction of a/b."""
    out = [(0, 1), (1, 0)]
    pm2, qm2, pm1, qm1 = 0, 1, 1, 0
    x, y = a, b
    while y:
        q, r = divmod(x, y)
        p, qq = q * pm1 + pm2, q * qm1 + qm2
        out.append((p, qq))
        pm2, qm2, pm1, qm1 = pm1, qm1, p, qq
        x, y = y, r
    return out


def symbol_zero_to(P: list, a: int, b: int) -> list:
    """A polynomial Q with P{0, a/b} = Q{0, oo} under the relations.

    The path is split along consecutive convergents, each a unimodular
    translate of {0, oo}.
    """
    g = math.gcd(a, b)
    a, b = a // g, b // g
    if b < 0:
        a, b = -a, -b
    cusps = _convergents(a, b)
    w = len(P) - 1
    total = [Fraction(0)] * (w + 1)
    for (x1, y1), (x2, y2) in zip(cusps, cusps[1:]):
        det = x2 * y1 - x1 * y2
        if det not in (1, -1):
            raise ArithmeticError("non-unimodular step")
        s = det
        gmat = (x2, s * x1, y2, s * y1)
        # g0 = x1/y1, g oo = x2/y2 and det g = 1
        Q = act(P, gmat)
        total = [t + q for t, q in zip(total, Q)]
    return total


def symbol_cusp_to_infinity(P: list, a: int, b: int) -> list:
    """Q with P{a/b, oo} = Q{0, oo}: {a/b, oo} = {0, oo} - {0, a/b}."""
    Z = symbol_zero_to(P, a, b)
    return [p - z for p, z in zip(P, Z)]


def twisted_symbol(w: int, n: int, chi: DirichletCharacter) -> list:
    """sum_a conj(chi)(a) (X - (a/N) Y)^n Y^(w-n) {a/N, oo} as a combination of [P]."""
    N = chi.modulus
    cbar = chi.conj()
    total = None
    for a in range(N):
        c = cbar(a) if N > 1 else Fraction(1)
        if c == 0:
            continue
        P = _shifted_monomial(w, n, Fraction(a, N))
        Q = symbol_cusp_to_infinity(P, a, N) if a else P
        term = [c * q if q else 0 for q in Q]
        total = term if total is None else [_norm(x + y) for x, y in zip(total, term)]
    return total


def _shifted_monomial(w: int, n: int, t: Fraction) -> list:
    # (X - tY)^n Y^(w-n): coefficient of X^i is C(n, i) (-t)^(n-i)
    out = [Fraction(0)] * (w + 1)
    for i in range(n + 1):
        out[i] = math.comb(n, i) * (-t) ** (n - i)
    return out


# ---------------------------------------------------------------------------
# critical values


@dataclass
class TwistedSymbolValue:
    form_label: str
    j: int
    chi_label: str
    eps: int
    value: AnyNumber
    """Gamma_C(j) L(f, j, chi) = omega_eps * value."""


def gauss_inverse(chi: DirichletCharacter):
    """1/tau(chi) = chi(-1) tau(conj chi) / N for primitive chi."""
    if chi.modulus == 1:
        return Fraction(1)
    return _norm(gauss_sum(chi.conj()) * Fraction(chi.sign(), chi.modulus))


_TWISTED: dict[tuple, TwistedSymbolValue] = {}


def twisted_value(f: Eigenform, j: int, chi: DirichletCharacter) -> TwistedSymbolValue:
    """Coordinate of Gamma_C(j) L(f, j, chi) along omega_eps, eps = (-1)^(j-1) chi(-1)."""
    key = (f.weight, f.index, j, chi.label)
    if key not in _TWISTED:
        _TWISTED[key] = _twisted_value(f, j, chi)
    return _TWISTED[key]


def _twisted_value(f: Eigenform, j: int, chi: DirichletCharacter) -> TwistedSymbolValue:
    k = f.weight
    if not 1 <= j <= k - 1:
        raise ValueError("j must lie in 1..k-1")
    if not chi.is_primitive():
        raise NotPrimitiveError(f"{chi.label} is not primitive")
    sym = eigen_symbol(f)
    w = k - 2
    n = j - 1
    eps = (-1) ** n * chi.sign()
    S = twisted_symbol(w, n, chi)
    other = sym(-eps, S)
    if other != 0:
        raise ArithmeticError("twisted symbol is not in the predicted eigenspace")
    val = sym(eps, S)
    # Gamma_C(j) L = 2 i^(-j) tau(conj chi)^(-1) omega_eps phi^eps(S)
    val = val * gauss_inverse(chi.conj()) * 2 * _i_power(-j)
    return TwistedSymbolValue(f.label, j, chi.label, eps, _norm(val))


def _i_power(e: int):
    e %= 4
    if e == 0:
        return Fraction(1)
    if e == 2:
        return Fraction(-1)
    return zeta(4, e)


def untwisted_ratio(f: Eigenform, j1: int, j2: int):
    """Gamma_C(j1) L(f, j1) / Gamma_C(j2) L(f, j2) for j1 = j2 mod 2."""
    if (j1 - j2) % 2:
        raise ValueError("critical points of different parity lie on different periods")
    from .characters import trivial_character
    t = trivial_character()
    a = twisted_value(f, j1, t).value
    b = twisted_value(f, j2, t).value
    return _norm(a / b)


def completed_ratio(f: Eigenform, j1: int, chi1: DirichletCharacter, j2: int, chi2: DirichletCharacter):
    """Gamma_C(j1) L(f, j1, chi1) / Gamma_C(j2) L(f, j2, chi2) on a common period."""
    v1 = twisted_value(f, j1, chi1)
    v2 = twisted_value(f, j2, chi2)
    if v1.eps != v2.eps:
        raise ValueError("values lie on different periods")
    return _norm(v1.value / v2.value)


def symbol_product(f: Eigenform, l1: int, l2: int, chi1: DirichletCharacter, chi2: DirichletCharacter):
    """M with bold-L = M * Omega, where Omega = omega_+ omega_- / (i <f, f>)."""
    v1 = twisted_value(f, l1, chi1)
    v2 = twisted_value(f, l2, chi2)
    if v1.eps == v2.eps:
        raise ConditionError("D1", "both twisted values lie on the same period")
    psi = multiply(chi1, chi2)
    psi0 = primitive_part(psi) if psi.modulus > 1 else psi
    # v1 v2 = Gamma_C L Gamma_C L / (omega_+ omega_-); divide by i^(l1+l2+1) tau(psi0) and multiply by i
    val = v1.value * v2.value * gauss_inverse(psi0) * _i_power(-(l1 + l2 + 1) + 1)
    return _norm(val)


@dataclass
class PeriodNormalization:
    weight: int
    label: str
    omega: AnyNumber
    anchor: tuple[int, int]


def fit_normalization(f: Eigenform, anchor: tuple[int, int] | None = None,
                      anchor_value_: AnyNumber | None = None) -> PeriodNormalization:
    """Omega_f chosen so the symbol prediction reproduces one level-one anchor."""
    from .characters import trivial_character
    from .nearly import anchor_value
    k = f.weight
    l1, l2 = anchor or (k - 1, k - 4)
    if anchor_value_ is None:
        anchor_value_ = anchor_value(k, l1, l2)[f.label]
    t = trivial_character()
    M = symbol_product(f, l1, l2, t, t)
    return PeriodNormalization(k, f.label, _norm(anchor_value_ / M), (l1, l2))


def critical_value(f: Eigenform, l1: int, l2: int, chi1: DirichletCharacter, chi2: DirichletCharacter,
                   norm: PeriodNormalization | None, enforce_d3: bool = True):
    """Exact bold-L(l1, l2; f; chi1, chi2) in Q(f, chi1, chi2)."""
    check_conditions(f.weight, l1, l2, chi1, chi2, require_d3=enforce_d3)
    if norm is None:
        raise ValueError("missing period normalization")
    if norm.label != f.label or norm.weight != f.weight:
        raise ValueError("normalization belongs to another eigenform")
    return _norm(symbol_product(f, l1, l2, chi1, chi2) * norm.omega)


# ---------------------------------------------------------------------------
# numerical oracle


def _chi_complex(chi: DirichletCharacter, n: int) -> complex:
    if chi.modulus == 1:
        return 1.0
    v = chi.value_fraction(n)
    if v is None:
        return 0.0
    return complex(mpmath.expjpi(2 * v))


def root_number(f: Eigenform, chi: DirichletCharacter) -> complex:
    """w = i^k tau(chi)^2 / N; the tests confirm it by moving the split point."""
    N = chi.modulus
    if N == 1:
        return complex(1j ** f.weight)
    tau = to_complex(gauss_sum(chi))
    return (1j ** f.weight) * tau * tau / N


def completed_lambda(f: Eigenform, s, chi: DirichletCharacter, w=None, t0: float = 1.0,
                     dps: int = 30, terms: int | None = None):
    """(N/2pi)^s Gamma(s) L(s, f, chi) by the incomplete-gamma splitting at t0."""
    N = chi.modulus
    k = f.weight
    with mpmath.workdps(dps):
        A = mpmath.mpf(N) / (2 * mpmath.pi)
        need = int(N * (dps * 2.4 + 2 * k) / (2 * math.pi * min(t0, 1 / t0))) + 10
        terms = terms or need
        if terms >= f.precision:
            raise InsufficientPrecisionError(f"need {terms + 1} coefficients", f.precision)
        w = root_number(f, chi) if w is None else w
        s = mpmath.mpf(s)
        tot1 = mpmath.mpc(0)
        tot2 = mpmath.mpc(0)
        for n in range(1, terms):
            an = f.embed(n)
            c = _chi_complex(chi, n)
            if c == 0 or an == 0:
                continue
            x = mpmath.mpf(n) / A
            tot1 += an * c * A ** s * mpmath.power(n, -s) * mpmath.gammainc(s, x * t0)
            tot2 += an * mpmath.conj(c) * A ** (k - s) * mpmath.power(n, s - k) * mpmath.gammainc(k - s, x / t0)
        return tot1 + w * tot2


def float_oracle_L(f: Eigenform, j: int, chi: DirichletCharacter, dps: int = 30) -> complex:
    """L(j, f, chi) = sum chi(n) a(n) n^(-j) numerically."""
    N = chi.modulus
    with mpmath.workdps(dps):
        lam = completed_lambda(f, j, chi, dps=dps)
        val = lam / ((mpmath.mpf(N) / (2 * mpmath.pi)) ** j * mpmath.gamma(j))
        return complex(val)


def gamma_C(s):
    return 2 * (2 * mpmath.pi) ** (-s) * mpmath.gamma(s)
