"""Local Siegel series of half-integral matrices of size <= 2 and degree-2 Eisenstein coefficients.

The Siegel series is computed as an exact polynomial in X = p^(-s) by
summing e_p(tr(BR)) X^(log_p nu(R)) over representatives R = M / p^e.
Every bucket with a fixed nu is Galois-stable, so its value is rational and
is read off from phase counts with Ramanujan sums.  For p = 2 the triples
(x, y, z) are enumerated with numpy; for odd p the matrix is diagonalized
over Z_(p) and the sum factors into one-variable sums and a y-count that
only depends on valuations and a square class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import factorint, primefactors

from .bernoulli import dirichlet_L_nonpositive, zeta_nonpositive
from .characters import (DirichletCharacter, KroneckerCharacter, chi_p, fundamental_discriminant, gauss_sum,
                         multiply, primitive_part)
from .fields import AnyNumber, simplify, vp, zeta


class TruncationError(ArithmeticError):
    def __init__(self, msg: str, required_e: int):
        super().__init__(f"{msg} (try e = {required_e})")
        self.required_e = required_e


class InterpolationError(ArithmeticError):
    """F_p came out non-integral or without constant term 1; always a bug."""


class ExcludedCaseError(ValueError):
    pass


@dataclass(frozen=True)
class HalfIntegralMatrix:
    """Size 0, 1 or 2; a and c on the diagonal, b2 = twice the off-diagonal entry."""

    size: int
    a: int = 0
    c: int = 0
    b2: int = 0

    @classmethod
    def one(cls, a: int) -> "HalfIntegralMatrix":
        return cls(1, a)

    @classmethod
    def two(cls, a: int, c: int, b2: int) -> "HalfIntegralMatrix":
        return cls(2, a, c, b2)

    @property
    def det2(self) -> int:
        """det(2B)."""
        if self.size == 0:
            return 1
        if self.size == 1:
            return 2 * self.a
        return 4 * self.a * self.c - self.b2 * self.b2

    @property
    def rank(self) -> int:
        if self.size == 0:
            return 0
        if self.size == 1:
            return int(self.a != 0)
        if self.det2:
            return 2
        return int(bool(self.a or self.c or self.b2))

    def is_nondegenerate(self) -> bool:
        return self.rank == self.size

    def is_psd(self) -> bool:
        if self.size == 1:
            return self.a >= 0
        if self.size == 0:
            return True
        return self.a >= 0 and self.c >= 0 and self.det2 >= 0

    def is_pd(self) -> bool:
        if self.size == 1:
            return self.a > 0
        return self.size == 2 and self.a > 0 and self.det2 > 0

    def transform(self, g: tuple[int, int, int, int]) -> "HalfIntegralMatrix":
        """B[g] = g^T B g for g = (p q; r s)."""
        p, q, r, s = g
        a, c, b2 = self.a, self.c, self.b2
        na = a * p * p + b2 * p * r + c * r * r
        nc = a * q * q + b2 * q * s + c * s * s
        nb2 = 2 * a * p * q + b2 * (p * s + q * r) + 2 * c * r * s
        return HalfIntegralMatrix(2, na, nc, nb2)

    def serialize(self) -> tuple:
        if self.size == 2:
            return (self.a, self.c, self.b2)
        if self.size == 1:
            return (self.a,)
        return ()


# ---------------------------------------------------------------------------
# helpers


def _ramanujan(q_exp: int, p: int, t: int) -> int:
    """c_{p^e}(t)."""
    if q_exp == 0:
        return 1
    q = p ** q_exp
    if t % q == 0:
        return q - q // p
    if t % (q // p) == 0:
        return -(q // p)
    return 0


def _vcap(n: int, p: int, cap: int) -> int:
    if n == 0:
        return cap
    return min(vp(n, p), cap)


def _legendre(u: int, p: int) -> int:
    u %= p
    if u == 0:
        return 0
    return 1 if pow(u, (p - 1) // 2, p) == 1 else -1


def _nonresidue(p: int) -> int:
    for n in range(2, p):
        if _legendre(n, p) == -1:
            return n
    raise ValueError("no non-residue")


def _mod_padic(x: Fraction, p: int, e: int) -> int:
    # x in Z_(p) reduced mod p^e
    q = p ** e
    return x.numerator * pow(x.denominator, -1, q) % q


def _poly_trim(c: list) -> list:
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def _poly_eval(c: list, x):
    out = 0
    for coef in reversed(c):
        out = out * x + coef
    return out


def _poly_mul(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


# ---------------------------------------------------------------------------
# brute-force Siegel series


def default_truncation(B: HalfIntegralMatrix, p: int) -> int:
    """p-exponent of the largest elementary divisor of 2B, plus 2 (at most ord_p det(2B) + 2)."""
    if B.size == 1:
        return vp(2 * B.a, p) + 2
    a, c, b2 = 2 * B.a, 2 * B.c, B.b2
    t1 = min(_vcap(a, p, 10 ** 6), _vcap(c, p, 10 ** 6), _vcap(b2, p, 10 ** 6))
    return vp(B.det2, p) - t1 + 2


def _series_size1(a: int, p: int, e: int) -> list[Fraction]:
    out = [Fraction(0)] * (e + 1)
    out[0] = Fraction(1)
    for i in range(e):
        # x = p^i u with u a unit mod p^(e-i)
        out[e - i] += _ramanujan(e - i, p, a)
    return _poly_trim(out)


def _nu_exponent(x: int, y: int, z: int, p: int, e: int) -> int:
    d1 = min(_vcap(x, p, e), _vcap(y, p, e), _vcap(z, p, e))
    if d1 >= e:
        return 0
    det = x * z - y * y
    vd = _vcap(det, p, e + d1)
    d2 = vd - d1
    return (e - d1) + max(0, e - d2)


def _bucket_values(counts: np.ndarray, p: int, e: int) -> list[Fraction]:
    # counts[exp, t]: number of R with nu = p^exp and phase exp(2 pi i t / p^e)
    q = p ** e
    phi = q - q // p
    ram = np.array([_ramanujan(e, p, t) for t in range(q)], dtype=object)
    out = []
    for row in counts:
        tot = sum(int(cnt) * r for cnt, r in zip(row, ram) if cnt and r)
        out.append(Fraction(tot, phi))
    return _poly_trim(out)


def _series_size2_enumerate(a: int, c: int, b2: int, p: int, e: int) -> list[Fraction]:
    """Full enumeration of x, y, z mod p^e (numpy, chunked over x)."""
    q = p ** e
    maxexp = 2 * e
    counts = np.zeros((maxexp + 1, q), dtype=np.int64)
    rng = np.arange(q, dtype=np.int64)
    Y, Z = np.meshgrid(rng, rng, indexing="ij")
    Y = Y.ravel()
    Z = Z.ravel()

    def vals(arr, cap):
        out = np.full(arr.shape, cap, dtype=np.int64)
        m = arr != 0
        sub = arr[m]
        v = np.zeros(sub.shape, dtype=np.int64)
        rest = sub.copy()
        for _ in range(cap):
            div = (rest % p == 0)
            if not div.any():
                break
            v += div
            rest = np.where(div, rest // p, rest)
        out[m] = np.minimum(v, cap)
        return out

    vY = vals(Y, e)
    vZ = vals(Z, e)
    for x in range(q):
        vx = _vcap(x, p, e)
        d1 = np.minimum(np.minimum(vY, vZ), vx)
        det = x * Z - Y * Y
        vd = vals(np.abs(det), 2 * e)
        vd = np.minimum(vd, e + d1)
        d2 = vd - d1
        exp = np.where(d1 >= e, 0, (e - d1) + np.maximum(0, e - d2))
        phase = (a * x + b2 * Y + c * Z) % q
        idx = exp * q + phase
        counts += np.bincount(idx, minlength=(maxexp + 1) * q).reshape(maxexp + 1, q)
    return _bucket_values(counts, p, e)


def diagonalize_odd(B: HalfIntegralMatrix, p: int) -> tuple[Fraction, Fraction]:
    """(alpha, beta) in Z_(p) with B equivalent to diag(alpha, beta) over Z_p, p odd."""
    a, h, c = Fraction(B.a), Fraction(B.b2, 2), Fraction(B.c)

    def v(x):
        return math.inf if x == 0 else vp(x, p)

    if v(h) < v(a) and v(h) < v(c):
        # e1 -> e1 + e2 makes the new diagonal entry carry the minimal valuation
        a, h = a + 2 * h + c, h + c
    if v(a) <= v(c):
        return a, c - h * h / a
    return c, a - h * h / c


def _onevar_sums(alpha: Fraction, p: int, e: int) -> dict[tuple[int, int], tuple[Fraction, Fraction]]:
    """A[i][s] = sum over x = p^i u, chi(u) = s of e(alpha x / p^e), as r0 + r1 g with g^2 = p*."""
    out = {}
    va = vp(alpha, p) if alpha != 0 else 10 ** 6
    unit = alpha / Fraction(p) ** va if alpha != 0 else Fraction(1)
    for i in range(e):
        m = e - i
        if va >= m:
            R, G = Fraction(p ** m - p ** (m - 1)), Fraction(0)
        elif va == m - 1:
            R = Fraction(-p ** (m - 1))
            G = Fraction(p ** (m - 1) * _legendre(_mod_padic(unit, p, 1), p))
        else:
            R, G = Fraction(0), Fraction(0)
        for s in (1, -1):
            out[(i, s)] = (R / 2, s * G / 2)
    out[(e, 1)] = (Fraction(1), Fraction(0))
    out[(e, -1)] = (Fraction(0), Fraction(0))
    return out


@lru_cache(maxsize=None)
def _y_distribution(p: int, e: int) -> dict[tuple[int, int, int], list[int]]:
    """Closed form of the y-count: only v(y) and, when 2v(y) = v(xz), the square class matter."""
    out = {}
    for i in range(e + 1):
        for j in range(e + 1):
            k = i + j if i < e and j < e else None
            for sigma in (1, -1):
                hist = [0] * (2 * e + 1)
                for h in range(e + 1):
                    d1 = min(i, j, h)
                    if d1 >= e:
                        hist[0] += 1 if h == e else p ** (e - h) - p ** (e - h - 1)
                        continue
                    cap = e + d1
                    if h == e:
                        pieces = [(cap if k is None else min(k, cap), 1)]
                    else:
                        cnt = p ** (e - h) - p ** (e - h - 1)
                        if k is None or 2 * h < k:
                            pieces = [(min(2 * h, cap), cnt)]
                        elif 2 * h > k or sigma == -1:
                            pieces = [(min(k, cap), cnt)]
                        else:
                            # w unit mod p^(e-h): #{v(1 - w^2) >= t} = 2 p^(e-h-t) for t >= 1
                            r = e - h
                            ge = [cnt] + [2 * p ** (r - t) for t in range(1, r + 1)] + [0]
                            pieces = [(min(k + t, cap), ge[t] - ge[t + 1]) for t in range(r)]
                            pieces.append((cap, ge[r]))
                    for vd, c in pieces:
                        if c:
                            hist[(e - d1) + max(0, e - (vd - d1))] += c
                out[(i, j, sigma)] = hist
    return out


def _y_distribution_loop(p: int, e: int) -> dict[tuple[int, int, int], list[int]]:
    """E[i, j, sigma][exp] = #{y mod p^e : nu(x, y, z) = p^exp} for class representatives x, z."""
    q = p ** e
    n = _nonresidue(p)
    out = {}
    for i in range(e + 1):
        x = p ** i if i < e else 0
        for j in range(e + 1):
            for sigma in (1, -1):
                z = (p ** j) * (1 if sigma == 1 else n) if j < e else 0
                hist = [0] * (2 * e + 1)
                for y in range(q):
                    hist[_nu_exponent(x, y, z, p, e)] += 1
                out[(i, j, sigma)] = hist
    return out


def _series_size2_odd(B: HalfIntegralMatrix, p: int, e: int) -> list[Fraction]:
    alpha, beta = diagonalize_odd(B, p)
    pstar = p if p % 4 == 1 else -p
    A = _onevar_sums(alpha, p, e)
    Bs = _onevar_sums(beta, p, e)
    E = _y_distribution(p, e)
    poly0 = [Fraction(0)] * (2 * e + 1)
    poly1 = [Fraction(0)] * (2 * e + 1)
    for (i, j, sigma), hist in E.items():
        c0, c1 = Fraction(0), Fraction(0)
        for s1 in (1, -1):
            s2 = sigma * s1
            a0, a1 = A[(i, s1)]
            b0, b1 = Bs[(j, s2)]
            c0 += a0 * b0 + a1 * b1 * pstar
            c1 += a0 * b1 + a1 * b0
        if c0 == 0 and c1 == 0:
            continue
        for ex, cnt in enumerate(hist):
            if cnt:
                poly0[ex] += cnt * c0
                poly1[ex] += cnt * c1
    if any(poly1):
        raise ArithmeticError("Siegel series picked up an irrational part")
    return _poly_trim(poly0)


def siegel_series_poly_at(B: HalfIntegralMatrix, p: int, e: int, method: str = "auto") -> list[Fraction]:
    """Truncated series sum over R with p^e R integral, as a polynomial in X = p^(-s)."""
    if not B.is_nondegenerate():
        raise ValueError("B must be nondegenerate")
    if B.size == 0:
        return [Fraction(1)]
    if B.size == 1:
        return _series_size1(B.a, p, e)
    if method == "enumerate" or (method == "auto" and p == 2):
        return _series_size2_enumerate(B.a, B.c, B.b2, p, e)
    if p == 2:
        raise ValueError("the diagonal method needs p odd")
    return _series_size2_odd(B, p, e)


@lru_cache(maxsize=None)
def siegel_series_poly(B: HalfIntegralMatrix, p: int, check_stability: bool = True) -> tuple[Fraction, ...]:
    e = default_truncation(B, p)
    poly = siegel_series_poly_at(B, p, e)
    if check_stability:
        nxt = siegel_series_poly_at(B, p, e + 1)
        if nxt != poly:
            raise TruncationError("Siegel series not stable under e -> e+1", e + 2)
    return tuple(poly)


def siegel_series_bruteforce(B: HalfIntegralMatrix, p: int, s: int) -> Fraction:
    """b_p(B, s) at an integer s."""
    return _poly_eval(list(siegel_series_poly(B, p)), Fraction(1, p) ** s)


# ---------------------------------------------------------------------------
# gamma factor and F_p


def xi_p(B: HalfIntegralMatrix, p: int) -> int:
    """chi_p((-1)^(m/2) det B) for even size m."""
    if B.size == 0:
        return 1
    if B.size != 2:
        raise ValueError("xi is defined for even size")
    return chi_p(-B.det2, p)


def gamma_factor(B: HalfIntegralMatrix, p: int) -> list[Fraction]:
    """gamma_p(B, X) as coefficients; the quotient is exact for every value of xi."""
    if B.size == 0:
        return [Fraction(1)]
    if B.size == 1:
        return [Fraction(1), Fraction(-1)]
    xi = xi_p(B, p)
    if xi == 0:
        return [Fraction(1), Fraction(-1), Fraction(-p * p), Fraction(p * p)]
    # (1 - X)(1 - p^2 X^2)/(1 - p xi X) = (1 - X)(1 + p xi X)
    return _poly_mul([Fraction(1), Fraction(-1)], [Fraction(1), Fraction(p * xi)])


@dataclass(frozen=True)
class LocalSiegelPolynomial:
    p: int
    B: HalfIntegralMatrix
    coeffs: tuple[int, ...]

    def __call__(self, x):
        return _poly_eval(list(self.coeffs), x)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


def _solve_vandermonde(xs: list[Fraction], ys: list[Fraction]) -> list[Fraction]:
    from .linalg import rref
    n = len(xs)
    rows = [[x ** j for j in range(n)] + [y] for x, y in zip(xs, ys)]
    R, piv = rref(rows)
    if piv != list(range(n)):
        raise InterpolationError("singular interpolation system")
    return [Fraction(r[-1]) for r in R]


@lru_cache(maxsize=None)
def local_F(B: HalfIntegralMatrix, p: int) -> LocalSiegelPolynomial:
    """F_p(B, X) by interpolation of b_p(B, s) / gamma_p(B, p^-s)."""
    if B.size == 0:
        return LocalSiegelPolynomial(p, B, (1,))
    b = list(siegel_series_poly(B, p))
    g = gamma_factor(B, p)
    deg = max(0, len(b) - len(g))
    xs, ys = [], []
    s = 2
    while len(xs) < deg + 1:
        X = Fraction(1, p) ** s
        gv = _poly_eval(g, X)
        if gv != 0:
            xs.append(X)
            ys.append(siegel_series_bruteforce(B, p, s) / gv)
        s += 1
    coeffs = _poly_trim(_solve_vandermonde(xs, ys))
    if any(c.denominator != 1 for c in coeffs) or coeffs[0] != 1:
        raise InterpolationError(f"F_{p} for {B} is not an integral polynomial with constant term 1: {coeffs}")
    out = LocalSiegelPolynomial(p, B, tuple(int(c) for c in coeffs))
    if _poly_trim(_poly_mul(g, [Fraction(c) for c in out.coeffs])) != b:
        raise InterpolationError(f"gamma * F differs from the Siegel series for {B} at p={p}")
    return out


def kitaoka_check(B: HalfIntegralMatrix, p: int) -> bool:
    """F_p(B, X / p^[(m+1)/2]) has integer coefficients."""
    F = local_F(B, p)
    h = (B.size + 1) // 2
    return all(Fraction(c, p ** (h * i)).denominator == 1 for i, c in enumerate(F.coeffs))


# ---------------------------------------------------------------------------
# degenerate matrices


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def reduce_rank_one(T: HalfIntegralMatrix, order: int = 0) -> tuple[HalfIntegralMatrix, tuple]:
    """Unimodular g with T = g diag(t, 0) g^T; returns ((t), g).  ``order`` picks one of two constructions."""
    a, c, b2 = T.a, T.c, T.b2
    # T = t v v^T with v primitive; the kernel vector w = (-v2, v1)
    g0 = math.gcd(a, c)
    t = g0 if a >= 0 and c >= 0 else -g0
    v1 = math.isqrt(a // t) if a else 0
    v2 = math.isqrt(c // t) if c else 0
    if b2 * t < 0:
        v2 = -v2
    if t * v1 * v1 != a or t * v2 * v2 != c or 2 * t * v1 * v2 != b2:
        raise ArithmeticError("not a rank-one half-integral matrix")
    # complete v to a unimodular matrix with first column v
    _, x, y = _ext_gcd(v1, v2)
    if order == 0:
        g = (v1, -y, v2, x)
    else:
        # a different completion: add a multiple of v to the second column
        g = (v1, -y + v1, v2, x + v2)
    return HalfIntegralMatrix.one(t), g


def local_F_star(T: HalfIntegralMatrix, p: int) -> LocalSiegelPolynomial:
    """F_p of a nondegenerate block equivalent to the rank part of T."""
    r = T.rank
    if r == 0:
        raise ValueError("rank 0: the caller uses the convention F* = 1")
    if r == T.size:
        return local_F(T, p)
    if T.size == 2 and r == 1:
        t1, _ = reduce_rank_one(T, 0)
        t2, _ = reduce_rank_one(T, 1)
        F1, F2 = local_F(t1, p), local_F(t2, p)
        if F1.coeffs != F2.coeffs:
            raise ArithmeticError("F* depends on the reduction")
        return F1
    raise ValueError("unsupported size")


# ---------------------------------------------------------------------------
# Fourier coefficients


def kronecker_of(B: HalfIntegralMatrix) -> tuple[int, int]:
    """(d_B, f_B) with -det(2B) = d_B f_B^2 for positive definite B of size 2."""
    return fundamental_discriminant(-B.det2)


def fourier_coeff_level1(B: HalfIntegralMatrix, l: int) -> Fraction:
    """c_{2,l}(B, 1, 1) of the degree-2 Siegel Eisenstein series (rank-split formula)."""
    if l % 2 or l < 4:
        raise ValueError("l must be even and at least 4")
    if B.size != 2 or not B.is_psd():
        raise ValueError("B must be a positive semidefinite matrix of size 2")
    m = B.rank
    sign = (-1) ** (l // 2 + 1)
    out = Fraction(sign * 2 ** (l - 1 + (m + 1) // 2))
    if m == 0:
        return out * zeta_nonpositive(2 * l - 2) * zeta_nonpositive(l)
    if m == 1:
        Tt, _ = reduce_rank_one(B)
        for p in primefactors(Tt.det2):
            out *= local_F(Tt, p)(Fraction(p) ** (l - 2))
        return out * zeta_nonpositive(2 * l - 2)
    for p in primefactors(B.det2):
        out *= local_F(B, p)(Fraction(p) ** (l - 3))
    d, _ = kronecker_of(B)
    chi = KroneckerCharacter(d).as_dirichlet()
    return out * Fraction(dirichlet_L_nonpositive(l - 1, chi))


@dataclass
class SiegelFourierCoefficient:
    weight: int
    level: int
    phi_label: str
    B: tuple
    value: AnyNumber
    normalized: AnyNumber


def _sqrt_abs_disc(d: int):
    """sqrt|d| = -i tau(chi_d) for a negative fundamental discriminant d."""
    tau = gauss_sum(KroneckerCharacter(d).as_dirichlet())
    return simplify(tau * zeta(4, 3))


def fourier_coeff_twisted(B: HalfIntegralMatrix, l: int, phi: DirichletCharacter) -> SiegelFourierCoefficient:
    """c_{2,l}(B, N, phi) for primitive phi mod N > 1, with tau(phi)^-1 i^-l c alongside."""
    N = phi.modulus
    if N <= 1 or not phi.is_primitive():
        raise ValueError("phi must be primitive of modulus > 1")
    if l < 2:
        raise ValueError("l must be at least 2")
    if l == 2 and multiply(phi, phi).is_principal():
        raise ExcludedCaseError("l = 2 with phi^2 trivial is the non-holomorphic exception")
    if B.size != 2 or not B.is_pd():
        return SiegelFourierCoefficient(l, N, phi.label, B.serialize(), Fraction(0), Fraction(0))
    d, f = kronecker_of(B)
    chiB = KroneckerCharacter(d).as_dirichlet()
    psi = primitive_part(multiply(phi, chiB))
    delta = psi.parity
    mpsi = psi.modulus
    const = Fraction((-1) ** (l + (l - 1 - delta) // 2) * 2 ** l, mpsi ** (l - 1)) * abs(d) ** (l - 2)
    val = simplify(_sqrt_abs_disc(d) * const * _ipow(-delta))
    val = simplify(val * gauss_sum(psi))
    phibar = phi.conj()
    for p in primefactors(B.det2):
        x = phibar(p)
        if x == 0:
            continue
        val = simplify(val * local_F(B, p)(simplify(x * Fraction(p) ** (l - 3))))
    val = simplify(val * dirichlet_L_nonpositive(l - 1, psi.conj()))
    for p in primefactors(N * abs(d)):
        val = simplify(val * (1 - Fraction(p) ** (1 - l) * psi(p)))
    # tau(phi)^-1 = phi(-1) tau(conj phi) / N
    tinv = simplify(gauss_sum(phibar) * Fraction(phi.sign(), N))
    norm = simplify(val * tinv * _ipow(-l))
    return SiegelFourierCoefficient(l, N, phi.label, B.serialize(), val, norm)


def _ipow(e: int):
    e %= 4
    return [Fraction(1), zeta(4, 1), Fraction(-1), zeta(4, 3)][e]


# ---------------------------------------------------------------------------
# corpora and validators


def corpus_size2(max_abs_det2: int) -> list[HalfIntegralMatrix]:
    """Reduced representatives of nondegenerate binary forms with 0 < |det 2B| <= bound.

    Anisotropic forms get |b| <= |a| <= |c|; forms representing zero are listed as (0, c, b)
    with 0 <= c < |b|.
    """
    out = []
    amax = math.isqrt(max_abs_det2 // 3) + 1
    for a in range(-amax, amax + 1):
        if a == 0:
            continue
        for b in range(-abs(a), abs(a) + 1):
            cmax = (max_abs_det2 + b * b) // (4 * abs(a)) + 1
            for c in range(-cmax, cmax + 1):
                if abs(c) < abs(a):
                    continue
                d = 4 * a * c - b * b
                if 0 < abs(d) <= max_abs_det2:
                    out.append(HalfIntegralMatrix.two(a, c, b))
    for b in range(1, max_abs_det2 + 1):
        if b * b > max_abs_det2:
            break
        for c in range(0, b):
            out.append(HalfIntegralMatrix.two(0, c, b))
    return out


def corpus_size1(max_abs_det2: int) -> list[HalfIntegralMatrix]:
    return [HalfIntegralMatrix.one(a) for a in range(-max_abs_det2 // 2, max_abs_det2 // 2 + 1) if a]


def psd_corpus(max_det2: int) -> list[HalfIntegralMatrix]:
    """Reduced positive semidefinite forms: 0 <= b <= a <= c with det(2B) <= bound, plus diag(0, c)."""
    out = [HalfIntegralMatrix.two(0, 0, 0)]
    for c in range(1, max_det2 // 2 + 1):
        out.append(HalfIntegralMatrix.two(0, c, 0))
    a = 1
    while 3 * a * a <= max_det2:
        for b in range(0, a + 1):
            c = a
            while 4 * a * c - b * b <= max_det2:
                out.append(HalfIntegralMatrix.two(a, c, b))
                c += 1
        a += 1
    return out


def integrality_validators(l: int, D: int, twisted_conductor: int = 0, twisted_det: int = 0) -> list[tuple]:
    """Counterexamples to the two integrality statements (empty when they hold)."""
    bad = []
    a_l = (2 * l - 2) * math.factorial(2 * l - 1)
    for B in psd_corpus(D):
        c = fourier_coeff_level1(B, l)
        if (c * a_l).denominator != 1:
            bad.append(("level1", l, B.serialize(), c))
    if twisted_conductor:
        from .characters import primitive_characters
        from .fields import denominator_primes
        for phi in primitive_characters(twisted_conductor):
            if phi.modulus == 1:
                continue
            for B in psd_corpus(twisted_det):
                if not B.is_pd() or math.gcd(B.det2, phi.modulus) != 1:
                    continue
                try:
                    fc = fourier_coeff_twisted(B, l, phi)
                except ExcludedCaseError:
                    continue
                primes = denominator_primes(simplify(fc.normalized * (l - 1)))
                if any(phi.modulus % p for p in primes):
                    bad.append(("twisted", l, phi.label, B.serialize(), primes))
    return bad
