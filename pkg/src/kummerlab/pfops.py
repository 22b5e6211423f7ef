"""Dense bivariate polynomials over F_p and the Gauss / Appell differential operators.

The counting functions of the Kummer and K3 families are polynomials of
degree at most ``N = (p - 1) / 2`` in each variable, so a dense
``(d1 + 1) x (d2 + 1)`` coefficient table is both the simplest and the
fastest representation.  Operators act formally: ``d/dz z^k = k z^(k-1)``
with ``k`` reduced mod p.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .fpcore import DomainError, PrimeContext, binomial, get_context, multinomial, pochhammer_half
from .series import HpgParamsAppell, HpgParamsGauss

_MAX_DENSE_P = 2**31


@dataclass(frozen=True, eq=False)
class BiPoly:
    """Polynomial ``sum c[i, j] z1^i z2^j`` with coefficients reduced mod ``p``.

    Equality compares coefficients after zero-extending both tables to a
    common shape, so trailing zero rows or columns do not matter.
    """

    p: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.p >= _MAX_DENSE_P:
            raise DomainError(f"dense polynomials need p < 2**31, got {self.p}")
        c = np.array(self.coeffs, dtype=np.int64, ndmin=2, copy=True)
        if c.ndim != 2:
            raise DomainError("coefficient table must be two-dimensional")
        c %= self.p
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zeros(cls, p: int, d1: int, d2: int) -> "BiPoly":
        return cls(p, np.zeros((d1 + 1, d2 + 1), dtype=np.int64))

    @classmethod
    def constant(cls, p: int, value: int) -> "BiPoly":
        return cls(p, [[value]])

    @classmethod
    def univariate(cls, p: int, coeffs, var: int = 0) -> "BiPoly":
        """Polynomial in ``z1`` (``var=0``) or ``z2`` (``var=1``) only."""
        col = np.asarray(coeffs, dtype=np.int64).reshape(-1, 1)
        return cls(p, col if var == 0 else col.T)

    @property
    def d1(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def d2(self) -> int:
        return self.coeffs.shape[1] - 1

    def padded(self, d1: int, d2: int) -> np.ndarray:
        out = np.zeros((max(d1, self.d1) + 1, max(d2, self.d2) + 1), dtype=np.int64)
        out[: self.d1 + 1, : self.d2 + 1] = self.coeffs
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiPoly) or other.p != self.p:
            return NotImplemented
        d1, d2 = max(self.d1, other.d1), max(self.d2, other.d2)
        return bool(np.array_equal(self.padded(d1, d2), other.padded(d1, d2)))

    def __hash__(self):
        return hash((self.p, self.trimmed().coeffs.tobytes()))

    def coefficient(self, i: int, j: int) -> int:
        if 0 <= i <= self.d1 and 0 <= j <= self.d2:
            return int(self.coeffs[i, j])
        return 0

    def trimmed(self) -> "BiPoly":
        nz = np.argwhere(self.coeffs)
        if nz.size == 0:
            return BiPoly(self.p, [[0]])
        d1, d2 = nz.max(axis=0)
        return BiPoly(self.p, self.coeffs[: d1 + 1, : d2 + 1])

    def __add__(self, other: "BiPoly") -> "BiPoly":
        d1, d2 = max(self.d1, other.d1), max(self.d2, other.d2)
        return BiPoly(self.p, self.padded(d1, d2) + other.padded(d1, d2))

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        d1, d2 = max(self.d1, other.d1), max(self.d2, other.d2)
        return BiPoly(self.p, self.padded(d1, d2) - other.padded(d1, d2))

    def scale(self, c: int) -> "BiPoly":
        return BiPoly(self.p, self.coeffs * (c % self.p))

    def evaluate(self, a: int, b: int) -> int:
        """Value at ``(z1, z2) = (a, b)`` by nested Horner."""
        p = self.p
        a %= p
        b %= p
        total = 0
        for row in self.coeffs[::-1]:
            inner = 0
            for c in row[::-1]:
                inner = (inner * b + int(c)) % p
            total = (total * a + inner) % p
        return total

    def to_dict(self) -> dict:
        return {"p": self.p, "coeffs": self.coeffs.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "BiPoly":
        return cls(int(data["p"]), data["coeffs"])


def is_zero(f: BiPoly) -> bool:
    return not f.coeffs.any()


# Formal calculus on coefficient tables; every helper keeps the input shape.


def _deriv(c: np.ndarray, axis: int, p: int) -> np.ndarray:
    out = np.zeros_like(c)
    n = c.shape[axis]
    k = np.arange(1, n, dtype=np.int64) % p
    if axis == 0:
        out[:-1, :] = c[1:, :] * k[:, None] % p
    else:
        out[:, :-1] = c[:, 1:] * k[None, :] % p
    return out


def _times_var(c: np.ndarray, axis: int) -> np.ndarray:
    """Multiply by ``z1`` or ``z2``; callers only apply this where the top coefficient is already zero."""
    out = np.zeros_like(c)
    if axis == 0:
        out[1:, :] = c[:-1, :]
        assert not c[-1, :].any(), "degree overflow"
    else:
        out[:, 1:] = c[:, :-1]
        assert not c[:, -1].any(), "degree overflow"
    return out


def _grow(c: np.ndarray, rows: int, cols: int) -> np.ndarray:
    out = np.zeros((c.shape[0] + rows, c.shape[1] + cols), dtype=np.int64)
    out[: c.shape[0], : c.shape[1]] = c
    return out


def _fit(p: int, out: np.ndarray, f: BiPoly) -> BiPoly:
    """Crop the working table back to the bounds of ``f`` when nothing spills over."""
    if out[f.d1 + 1 :, :].any() or out[:, f.d2 + 1 :].any():
        return BiPoly(p, out)
    return BiPoly(p, out[: f.d1 + 1, : f.d2 + 1])


class Variable(enum.IntEnum):
    FIRST = 0
    SECOND = 1


@dataclass(frozen=True)
class GaussOperator:
    """``z(1-z) F'' + (gamma - (alpha + beta + 1) z) F' - alpha beta F`` in one variable."""

    params: HpgParamsGauss = HpgParamsGauss()
    variable: Variable = Variable.FIRST


@dataclass(frozen=True)
class AppellOperator:
    """One of the two operators annihilating Appell ``F_2``, selected by ``index`` in {1, 2}."""

    params: HpgParamsAppell = HpgParamsAppell()
    index: int = 1

    def __post_init__(self):
        if self.index not in (1, 2):
            raise DomainError(f"Appell operator index must be 1 or 2, got {self.index}")


def apply_gauss(opr: GaussOperator, f: BiPoly) -> BiPoly:
    """Formal application of the Gauss operator in the selected variable.

    The result has the same degree bounds as ``f``: ``z F''``, ``z^2 F''``,
    ``z F'`` never exceed the input degree.
    """
    p = f.p
    a, b, g = opr.params.mod(get_context(p))
    ax = int(opr.variable)
    # One spare row/column so shifting by z never drops a coefficient.
    c = _grow(f.coeffs, 1 if ax == 0 else 0, 1 if ax == 1 else 0)
    d1 = _deriv(c, ax, p)
    d2 = _deriv(d1, ax, p)
    z_d2 = _times_var(d2, ax)
    z_d1 = _times_var(d1, ax)
    out = (z_d2 - _times_var(z_d2, ax) + g * d1 - (a + b + 1) % p * z_d1 - a * b % p * c) % p
    return _fit(p, out, f)


def apply_appell(opr: AppellOperator, f: BiPoly) -> BiPoly:
    """Formal application of ``L^(1)`` or ``L^(2)``.

    ``L^(1) = z1(1-z1) d11 - z1 z2 d12 + (g1 - (a + b1 + 1) z1) d1 - b1 z2 d2 - a b1``
    and ``L^(2)`` is the same with the variables exchanged.
    """
    p = f.p
    a, b1, b2, g1, g2 = opr.params.mod(get_context(p))
    if opr.index == 1:
        ax, other, b, g = 0, 1, b1, g1
    else:
        ax, other, b, g = 1, 0, b2, g2
    c = _grow(f.coeffs, 1, 1)
    da = _deriv(c, ax, p)
    daa = _deriv(da, ax, p)
    dab = _deriv(da, other, p)
    do = _deriv(c, other, p)
    z_daa = _times_var(daa, ax)
    out = (
        z_daa
        - _times_var(z_daa, ax)
        - _times_var(_times_var(dab, ax), other)
        + g * da
        - (a + b + 1) % p * _times_var(da, ax)
        - b * _times_var(do, other)
        - a * b % p * c
    ) % p
    return _fit(p, out, f)


def poly_from_countX(ctx: PrimeContext) -> BiPoly:
    """The Kummer count formula as a polynomial in ``(lam1, lam2)``.

    The monomial ``lam1^i lam2^j (lam1 lam2)^k`` contributes to the
    coefficient of ``lam1^(i+k) lam2^(j+k)``.
    """
    p, N = ctx.p, ctx.N
    c = np.zeros((N + 1, N + 1), dtype=np.int64)
    for m in range(N + 1):
        n = N - m
        for i in range(m + 1):
            for j in range(m + 1):
                for k in range(min(n, N - i - j) + 1):
                    l = N - i - j - k
                    if l > n:
                        continue
                    w = multinomial(ctx, N, [i, j, k, l]) * multinomial(ctx, N, [m - i, m - j, n - k, n - l]) % p
                    c[i + k, j + k] = (c[i + k, j + k] + w) % p
    return BiPoly(p, c)


def poly_from_countZ(ctx: PrimeContext) -> BiPoly:
    """Truncated Appell series in multinomial form: ``(N; i, j, N-i-j) C(N, i) C(N, j)`` at ``(i, j)``."""
    p, N = ctx.p, ctx.N
    c = np.zeros((N + 1, N + 1), dtype=np.int64)
    for i in range(N + 1):
        for j in range(N + 1 - i):
            c[i, j] = multinomial(ctx, N, [i, j, N - i - j]) * binomial(ctx, N, i) % p * binomial(ctx, N, j) % p
    return BiPoly(p, c)


def poly_appell_truncated(ctx: PrimeContext) -> BiPoly:
    """Truncated Appell series from its Pochhammer coefficients ``(1/2)_{m+n}(1/2)_m(1/2)_n / (m!^2 n!^2)``."""
    p, N = ctx.p, ctx.N
    inv = ctx.inverse_factorials
    c = np.zeros((N + 1, N + 1), dtype=np.int64)
    for m in range(N + 1):
        for n in range(N + 1 - m):
            w = pochhammer_half(ctx, m + n) * pochhammer_half(ctx, m) % p * pochhammer_half(ctx, n) % p
            c[m, n] = w * inv[m] % p * inv[m] % p * inv[n] % p * inv[n] % p
    return BiPoly(p, c)


def poly_trunc_2f1(ctx: PrimeContext, variable: Variable = Variable.FIRST) -> BiPoly:
    """``sum_r C(N, r)^2 z^r`` in the selected variable."""
    coeffs = [binomial(ctx, ctx.N, r) ** 2 % ctx.p for r in range(ctx.N + 1)]
    return BiPoly.univariate(ctx.p, coeffs, int(variable))
