"""Arithmetic in the prime field F_p and the combinatorial kernels built on it.

A :class:`PrimeContext` owns the prime together with eagerly built tables
(factorials, inverse factorials, quadratic characters, square roots).  All
functions in this module take plain integers and return canonical residues
in ``[0, p)``; :class:`FpElem` is a thin convenience wrapper for code that
prefers operator syntax.
"""

from __future__ import annotations

import functools
import operator
import os
from typing import Iterable, Sequence

import numpy as np
from sympy import isprime

DEFAULT_MAX_P = 2**20
MAX_P_ENV = "KUMMERLAB_MAX_P"

# int64 products of two residues stay exact below this bound.
_INT64_SAFE_P = 2**31


class KummerlabError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(KummerlabError, ValueError):
    """An argument lies outside the range a table or formula supports."""


def max_prime() -> int:
    """Largest prime accepted by :class:`PrimeContext`, honouring ``KUMMERLAB_MAX_P``."""
    raw = os.environ.get(MAX_P_ENV)
    if raw is None or raw == "":
        return DEFAULT_MAX_P
    try:
        value = int(raw)
    except ValueError:
        raise DomainError(f"{MAX_P_ENV}={raw!r} is not an integer") from None
    if value < 3:
        raise DomainError(f"{MAX_P_ENV} must be at least 3, got {value}")
    return value


class PrimeContext:
    """An odd prime ``p`` with its precomputed tables.

    Instances are immutable after construction and may be shared freely
    between threads.
    """

    __slots__ = (
        "p",
        "N",
        "half",
        "factorials",
        "inverse_factorials",
        "residue_table",
        "_roots",
        "_frozen",
    )

    def __init__(self, p: int, max_p: int | None = None):
        p = operator.index(p)
        cap = max_prime() if max_p is None else max_p
        if p < 3 or not isprime(p):
            raise DomainError(f"p={p} is not an odd prime")
        if p > cap:
            raise DomainError(f"p={p} exceeds the prime cap {cap} (set {MAX_P_ENV} to raise it)")
        self.p = p
        self.N = (p - 1) // 2
        self.half = (p + 1) // 2

        fac = [1] * p
        for k in range(1, p):
            fac[k] = fac[k - 1] * k % p
        inv = [1] * p
        inv[p - 1] = pow(fac[p - 1], p - 2, p)
        for k in range(p - 1, 0, -1):
            inv[k - 1] = inv[k] * k % p
        self.factorials = tuple(fac)
        self.inverse_factorials = tuple(inv)

        # Squares by enumeration, so the table is independent of Euler's criterion.
        dtype = np.int64 if p < _INT64_SAFE_P else object
        b = np.arange(1, self.N + 1, dtype=dtype)
        squares = b * b % p
        table = np.full(p, -1, dtype=np.int8)
        table[0] = 0
        table[squares.astype(np.int64)] = 1
        roots = np.full(p, -1, dtype=np.int64)
        roots[0] = 0
        roots[squares.astype(np.int64)] = b.astype(np.int64)
        table.setflags(write=False)
        roots.setflags(write=False)
        self.residue_table = table
        self._roots = roots
        self._frozen = True

    def __setattr__(self, name, value):
        if getattr(self, "_frozen", False):
            raise AttributeError("PrimeContext is immutable")
        object.__setattr__(self, name, value)

    def __repr__(self) -> str:
        return f"PrimeContext(p={self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeContext) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeContext", self.p))

    def __reduce__(self):
        return (get_context, (self.p,))

    @property
    def numpy_dtype(self):
        """Integer dtype under which products of two residues are exact."""
        return np.int64 if self.p < _INT64_SAFE_P else object

    def reduce(self, a) -> int:
        return operator.index(a) % self.p

    def inv(self, a) -> int:
        a = operator.index(a) % self.p
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.p}")
        return pow(a, self.p - 2, self.p)

    def sqrt(self, a) -> int | None:
        """Some square root of ``a``, or ``None`` when ``a`` is a non-residue."""
        r = int(self._roots[operator.index(a) % self.p])
        return None if r < 0 else r

    def sqrts(self, a) -> tuple[int, ...]:
        """All square roots of ``a`` in ascending order."""
        r = self.sqrt(a)
        if r is None:
            return ()
        if r == 0:
            return (0,)
        return tuple(sorted((r, self.p - r)))

    def elem(self, a) -> "FpElem":
        return FpElem(a, self.p)

    def elements(self) -> range:
        return range(self.p)


@functools.lru_cache(maxsize=64)
def _cached_context(p: int, cap: int) -> PrimeContext:
    return PrimeContext(p, max_p=cap)


def get_context(p: int) -> PrimeContext:
    """Shared :class:`PrimeContext` for ``p`` (cached per prime and cap)."""
    return _cached_context(operator.index(p), max_prime())


class FpElem:
    """A residue mod ``p`` with field operations.

    Compares equal to canonical Python integers, so ``FpElem(6, 7) == 6``.
    """

    __slots__ = ("value", "p")

    def __init__(self, value, p: int):
        self.p = p
        self.value = operator.index(value) % p

    def _coerce(self, other) -> int:
        if isinstance(other, FpElem):
            if other.p != self.p:
                raise ValueError(f"mixing residues mod {self.p} and mod {other.p}")
            return other.value
        return operator.index(other) % self.p

    def __index__(self) -> int:
        return self.value

    __int__ = __index__

    def __repr__(self) -> str:
        return f"FpElem({self.value}, p={self.p})"

    def __eq__(self, other) -> bool:
        try:
            return self.value == self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self) -> int:
        return hash(self.value)

    def __add__(self, other):
        return FpElem(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FpElem(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return FpElem(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return FpElem(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElem(-self.value, self.p)

    def __pow__(self, e: int):
        if e < 0:
            return FpElem(pow(self.inverse().value, -e, self.p), self.p)
        return FpElem(pow(self.value, e, self.p), self.p)

    def inverse(self) -> "FpElem":
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.p}")
        return FpElem(pow(self.value, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        return self * FpElem(self._coerce(other), self.p).inverse()

    def __rtruediv__(self, other):
        return FpElem(self._coerce(other), self.p) / self

    def __bool__(self) -> bool:
        return self.value != 0


def legendre_symbol(ctx: PrimeContext, a) -> int:
    """Quadratic character of ``a``: +1, -1, or 0 for ``a == 0``."""
    return int(ctx.residue_table[operator.index(a) % ctx.p])


def euler_pow(ctx: PrimeContext, a) -> int:
    """``a ** ((p - 1) / 2) mod p`` by square-and-multiply."""
    return pow(operator.index(a) % ctx.p, ctx.N, ctx.p)


def euler_pow_array(ctx: PrimeContext, values: np.ndarray) -> np.ndarray:
    """Elementwise :func:`euler_pow` on an array of residues."""
    p = ctx.p
    base = np.asarray(values, dtype=ctx.numpy_dtype) % p
    result = np.ones_like(base)
    e = ctx.N
    while e:
        if e & 1:
            result = result * base % p
        e >>= 1
        if e:
            base = base * base % p
    return result


def binomial(ctx: PrimeContext, n: int, k: int) -> int:
    """``C(n, k) mod p`` for ``0 <= n <= p - 1``; zero outside ``0 <= k <= n``."""
    if not 0 <= n <= ctx.p - 1:
        raise DomainError(f"binomial needs 0 <= n <= p-1, got n={n} for p={ctx.p}")
    if k < 0 or k > n:
        return 0
    p = ctx.p
    return ctx.factorials[n] * ctx.inverse_factorials[k] % p * ctx.inverse_factorials[n - k] % p


def multinomial(ctx: PrimeContext, N: int, parts: Sequence[int]) -> int:
    """``N! / (a_1! ... a_r!) mod p``, or 0 unless the parts are nonnegative and sum to ``N``."""
    if not 0 <= N <= ctx.p - 1:
        raise DomainError(f"multinomial needs 0 <= N <= p-1, got N={N} for p={ctx.p}")
    if sum(parts) != N or any(a < 0 for a in parts):
        return 0
    p = ctx.p
    r = ctx.factorials[N]
    for a in parts:
        r = r * ctx.inverse_factorials[a] % p
    return r


def pochhammer_half(ctx: PrimeContext, k: int) -> int:
    """``(1/2)_k mod p`` with 1/2 represented by ``(p + 1) / 2``.

    Defined for ``0 <= k <= (p - 1) / 2``; one step further the product
    picks up the factor ``1/2 + (p - 1)/2 = p/2 = 0``.
    """
    if not 0 <= k <= ctx.N:
        raise DomainError(f"pochhammer_half needs 0 <= k <= {ctx.N}, got {k}")
    p = ctx.p
    r = 1
    for i in range(k):
        r = r * (ctx.half + i) % p
    return r


def power_sum(ctx: PrimeContext, k: int) -> int:
    """``sum_{x in F_p} x**k mod p`` by direct summation (with ``0**0 = 1``)."""
    p = ctx.p
    return sum(pow(x, k, p) for x in range(p)) % p


def to_residue(ctx: PrimeContext, value) -> int:
    """Map an integer or an exact rational (``Fraction``) into F_p."""
    num = getattr(value, "numerator", None)
    den = getattr(value, "denominator", None)
    if num is None or den is None:
        raise TypeError(f"cannot map {value!r} into F_{ctx.p}")
    return operator.index(num) * ctx.inv(den) % ctx.p


def primes_up_to(bound: int, start: int = 3) -> list[int]:
    """Odd primes ``start <= p <= bound``."""
    from sympy import primerange

    return [int(q) for q in primerange(max(start, 3), bound + 1)]


def validate_primes(values: Iterable[int]) -> list[int]:
    """Return ``values`` as a list after checking each is an odd prime within the cap."""
    out = []
    cap = max_prime()
    for q in values:
        q = operator.index(q)
        if q < 3 or not isprime(q):
            raise DomainError(f"p={q} is not an odd prime")
        if q > cap:
            raise DomainError(f"p={q} exceeds the prime cap {cap}")
        out.append(q)
    return out
