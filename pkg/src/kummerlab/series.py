"""Truncated hypergeometric series mod p and floating-point series evaluators.

The mod-p side works with ``N = (p - 1) / 2`` throughout: the truncated
Gauss series in the Legendre parameter, the truncated Appell ``F_2``, the
multinomial double sum that counts points on the Kummer family, and the two
sides of the congruence that relates the last two through the moduli map.

The float side sums Gauss ``2F1`` and Appell ``F_2`` inside their discs of
convergence and uses them to check the Bailey-Barnes factorisation of
``F_2`` into two Gauss functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

import numpy as np

from .fpcore import (
    KummerlabError,
    PrimeContext,
    binomial,
    multinomial,
    pochhammer_half,
    to_residue,
)
from .models import moduli_forward

HALF = Fraction(1, 2)


class NonConvergent(KummerlabError, ArithmeticError):
    """The series argument lies outside the disc of absolute convergence."""


class BadParams(KummerlabError, ValueError):
    """A lower parameter is a pole (0, -1, -2, ...)."""


class DomainViolation(KummerlabError, ValueError):
    """Inputs lie outside the region where the factorisation is asserted."""

    def __init__(self, condition: str):
        super().__init__(f"outside the domain: {condition}")
        self.condition = condition


@dataclass(frozen=True)
class HpgParamsGauss:
    """Parameters ``(alpha, beta; gamma)`` of Gauss ``2F1``.

    Fields are exact rationals (or floats for the float evaluator); the
    default is ``2 alpha = 2 beta = gamma = 1``.
    """

    alpha: Fraction | float = HALF
    beta: Fraction | float = HALF
    gamma: Fraction | float = Fraction(1)

    def mod(self, ctx: PrimeContext) -> tuple[int, int, int]:
        return tuple(to_residue(ctx, Fraction(v)) for v in (self.alpha, self.beta, self.gamma))


@dataclass(frozen=True)
class HpgParamsAppell:
    """Parameters ``(alpha; beta1, beta2; gamma1, gamma2)`` of Appell ``F_2``."""

    alpha: Fraction | float = HALF
    beta1: Fraction | float = HALF
    beta2: Fraction | float = HALF
    gamma1: Fraction | float = Fraction(1)
    gamma2: Fraction | float = Fraction(1)

    def mod(self, ctx: PrimeContext) -> tuple[int, int, int, int, int]:
        vals = (self.alpha, self.beta1, self.beta2, self.gamma1, self.gamma2)
        return tuple(to_residue(ctx, Fraction(v)) for v in vals)

    @classmethod
    def quadric(cls, beta1, beta2) -> "HpgParamsAppell":
        """The quadric-property family ``alpha = beta1 + beta2 - 1/2``, ``gamma_i = 2 beta_i``."""
        b1, b2 = Fraction(beta1), Fraction(beta2)
        return cls(b1 + b2 - HALF, b1, b2, 2 * b1, 2 * b2)


# --- mod p -----------------------------------------------------------------


def trunc_2f1(ctx: PrimeContext, lam) -> int:
    """``sum_{r <= N} C(N, r)^2 lam^r mod p``.

    Agrees mod p with the series in ``binom(-1/2, r)^2`` since
    ``N = (p - 1)/2`` is congruent to ``-1/2``.
    """
    p, N = ctx.p, ctx.N
    lam %= p
    total, power = 0, 1
    for r in range(N + 1):
        c = binomial(ctx, N, r)
        total = (total + c * c * power) % p
        power = power * lam % p
    return total


def appell_coefficient(ctx: PrimeContext, i: int, j: int) -> int:
    """Coefficient of ``z1^i z2^j`` in the truncated Appell series (multinomial form)."""
    N = ctx.N
    if i < 0 or j < 0 or i + j > N:
        return 0
    p = ctx.p
    return multinomial(ctx, N, [i, j, N - i - j]) * binomial(ctx, N, i) % p * binomial(ctx, N, j) % p


def appell_coefficient_pochhammer(ctx: PrimeContext, i: int, j: int) -> int:
    """Same coefficient from the Pochhammer form ``(1/2)_{i+j} (1/2)_i (1/2)_j / (i!^2 j!^2)``."""
    if i < 0 or j < 0 or i + j > ctx.N:
        return 0
    p = ctx.p
    fi, fj = ctx.inverse_factorials[i], ctx.inverse_factorials[j]
    num = pochhammer_half(ctx, i + j) * pochhammer_half(ctx, i) % p * pochhammer_half(ctx, j) % p
    return num * fi % p * fi % p * fj % p * fj % p


def trunc_appell_f2(ctx: PrimeContext, z1, z2) -> int:
    """Truncated Appell ``F_2(z1, z2)`` of total degree ``N`` in F_p."""
    p, N = ctx.p, ctx.N
    z1 %= p
    z2 %= p
    total = 0
    p1 = 1
    for i in range(N + 1):
        p2 = 1
        for j in range(N + 1 - i):
            total = (total + appell_coefficient(ctx, i, j) * p1 % p * p2) % p
            p2 = p2 * z2 % p
        p1 = p1 * z1 % p
    return total


def kummer_count_formula(ctx: PrimeContext, lam1, lam2) -> int:
    """Closed form for the affine point count of the Kummer J6 model mod p.

    The sum runs over ``m + n = N`` and ``i + j + k + l = N`` of the product
    of multinomials ``(N; i, j, k, l) (N; m-i, m-j, n-k, n-l)`` times
    ``lam1^i lam2^j (lam1 lam2)^k``.  The second multinomial vanishes unless
    ``i, j <= m`` and ``k, l <= n``, which bounds the loops.
    """
    p, N = ctx.p, ctx.N
    lam1 %= p
    lam2 %= p
    pw1 = [pow(lam1, e, p) for e in range(N + 1)]
    pw2 = [pow(lam2, e, p) for e in range(N + 1)]
    total = 0
    for m in range(N + 1):
        n = N - m
        for i in range(m + 1):
            for j in range(m + 1):
                for k in range(min(n, N - i - j) + 1):
                    l = N - i - j - k
                    if l > n:
                        continue
                    c = multinomial(ctx, N, [i, j, k, l])
                    if c == 0:
                        continue
                    c = c * multinomial(ctx, N, [m - i, m - j, n - k, n - l]) % p
                    total = (total + c * pw1[i + k] % p * pw2[j + k]) % p
    return total


def sign_N(ctx: PrimeContext) -> int:
    """``(-1)^N`` as a residue."""
    return 1 if ctx.N % 2 == 0 else ctx.p - 1


def identity_sides(ctx: PrimeContext, k1, k2) -> tuple[int, int]:
    """Both sides of the two-parameter congruence at ``(k1, k2)``.

    ``lhs`` is the Kummer count formula at ``(k1^2, k2^2)``; ``rhs`` is
    ``(-1)^N`` times the truncated Appell series at the image of the moduli
    map.  Raises :class:`~kummerlab.models.UndefinedModuli` when
    ``k1 + k2 = 0``.
    """
    pair = moduli_forward(ctx, k1, k2)
    lhs = kummer_count_formula(ctx, pair.lam1, pair.lam2)
    rhs = sign_N(ctx) * trunc_appell_f2(ctx, pair.z1, pair.z2) % ctx.p
    return lhs, rhs


def igusa_count(ctx: PrimeContext, lam) -> int:
    """Affine point count of the Legendre curve mod p: ``-(-1)^N trunc_2f1(lam)``."""
    return -sign_N(ctx) * trunc_2f1(ctx, lam) % ctx.p


# --- floating point --------------------------------------------------------

_MAX_TERMS = 100_000


def _check_lower(name: str, value: float) -> None:
    if value <= 0 and float(value).is_integer():
        raise BadParams(f"{name}={value} is a pole of the series")


def gauss2f1_float(params: HpgParamsGauss, z: float, tol: float = 1e-15) -> float:
    """Gauss ``2F1(alpha, beta; gamma; z)`` by direct summation for ``|z| < 1``.

    Stops once a term falls below ``tol * (1 - |z|)``, which bounds the
    geometric tail once the term ratio has settled near ``|z|``.
    """
    a, b, c = float(params.alpha), float(params.beta), float(params.gamma)
    _check_lower("gamma", c)
    z = float(z)
    rho = abs(z)
    if rho >= 1:
        raise NonConvergent(f"|z| = {rho} >= 1")
    total, term = 1.0, 1.0
    threshold = tol * (1 - rho)
    for n in range(_MAX_TERMS):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        if term == 0.0:
            return total
        # The ratio tends to |z| from above or below; only trust the bound once it is below 1.
        ratio = abs((a + n + 1) * (b + n + 1) / ((c + n + 1) * (n + 2)) * z)
        if ratio < 1 and abs(term) * ratio / (1 - ratio) < threshold:
            return total
    raise NonConvergent(f"no convergence after {_MAX_TERMS} terms at z={z}")


def f2_float(params: HpgParamsAppell, z1: float, z2: float, tol: float = 1e-15) -> float:
    """Appell ``F_2`` by summing diagonal blocks of fixed total degree ``d``.

    The term at ``(m, n)`` is written as
    ``(alpha)_d / d! * C(d, m) z1^m z2^n * (b1)_m/(g1)_m * (b2)_n/(g2)_n``.
    Each factor stays of moderate size (the binomial row is bounded by
    ``rho^d`` with ``rho = |z1| + |z2|``), so nothing overflows before the
    series has converged.  Summation stops once three consecutive blocks have
    absolute sum below ``tol * (1 - rho)``.
    """
    a = float(params.alpha)
    b1, b2 = float(params.beta1), float(params.beta2)
    c1, c2 = float(params.gamma1), float(params.gamma2)
    _check_lower("gamma1", c1)
    _check_lower("gamma2", c2)
    z1, z2 = float(z1), float(z2)
    rho = abs(z1) + abs(z2)
    if rho >= 1:
        raise NonConvergent(f"|z1| + |z2| = {rho} >= 1")
    threshold = tol * (1 - rho)
    row = np.ones(1)  # C(d, m) z1^m z2^(d-m)
    P = [1.0]  # (b1)_m / (g1)_m
    Q = [1.0]  # (b2)_n / (g2)_n
    A = 1.0  # (alpha)_d / d!
    total = 1.0
    quiet = 0
    for d in range(1, _MAX_TERMS):
        nxt = np.zeros(d + 1)
        nxt[1:] += z1 * row
        nxt[:-1] += z2 * row
        row = nxt
        P.append(P[-1] * (b1 + d - 1) / (c1 + d - 1))
        Q.append(Q[-1] * (b2 + d - 1) / (c2 + d - 1))
        A *= (a + d - 1) / d
        terms = A * row * np.array(P) * np.array(Q[::-1])
        total += float(terms.sum())
        size = float(np.abs(terms).sum())
        # Require a few consecutive small blocks so an early dip cannot stop the sum.
        quiet = quiet + 1 if size < threshold else 0
        if quiet >= 3:
            return total
        if not math.isfinite(total):
            break
    raise NonConvergent(f"no convergence at (z1, z2) = ({z1}, {z2})")


def moduli_float(k1: float, k2: float) -> tuple[float, float]:
    s = k1 + k2
    if s == 0:
        raise DomainViolation("k1 + k2 != 0")
    return 4 * k1 * k2 / (s * s), -(k1 * k1 - 1) * (k2 * k2 - 1) / (s * s)


def clausen_sides(beta1, beta2, k1: float, k2: float, tol: float = 1e-15) -> tuple[float, float]:
    """Both sides of the factorisation of the quadric-property ``F_2`` into two ``2F1``.

    ``F_2(b1 + b2 - 1/2; b1, b2; 2 b1, 2 b2; z1, z2)`` against
    ``(k1 + k2)^(2 b1 + 2 b2 - 1) 2F1(b1 + b2 - 1/2, b2; b1 + 1/2; k1^2)
    2F1(b1 + b2 - 1/2, b2; 2 b2; 1 - k2^2)``.
    """
    b1, b2 = Fraction(beta1), Fraction(beta2)
    if b1 <= 0:
        raise DomainViolation("Re beta1 > 0")
    if b2 <= 0:
        raise DomainViolation("Re beta2 > 0")
    k1, k2 = float(k1), float(k2)
    z1, z2 = moduli_float(k1, k2)
    if not abs(z1) + abs(z2) < 1:
        raise DomainViolation("|z1| + |z2| < 1")
    if not k1 * k1 < 1:
        raise DomainViolation("|k1^2| < 1")
    if not abs(1 - k2 * k2) < 1:
        raise DomainViolation("|1 - k2^2| < 1")
    exponent = 2 * b1 + 2 * b2 - 1
    s = k1 + k2
    if s < 0 and exponent.denominator != 1:
        raise DomainViolation("k1 + k2 > 0 (real power with non-integer exponent)")
    a = b1 + b2 - HALF
    lhs = f2_float(HpgParamsAppell.quadric(b1, b2), z1, z2, tol)
    g1 = gauss2f1_float(HpgParamsGauss(a, b2, b1 + HALF), k1 * k1, tol)
    g2 = gauss2f1_float(HpgParamsGauss(a, b2, 2 * b2), 1 - k2 * k2, tol)
    if exponent.denominator == 1:
        scale = s ** int(exponent)
    else:
        scale = s ** float(exponent)
    return lhs, scale * g1 * g2


def clausen_residual(beta1, beta2, k1: Real, k2: Real, tol: float = 1e-15) -> float:
    """``|LHS - RHS|`` of the multivariate Clausen factorisation."""
    lhs, rhs = clausen_sides(beta1, beta2, k1, k2, tol)
    return abs(lhs - rhs)
