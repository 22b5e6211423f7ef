"""Sparse dictionary polynomials over F_p.

A deliberately naive second polynomial engine, used to cross-check the
dense tables in :mod:`kummerlab.pfops`.  Operators are assembled from ring
operations (products with explicit coefficient polynomials and partial
derivatives), not from shifted coefficient arrays.
"""

from __future__ import annotations

from fractions import Fraction


class SparsePoly:
    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms: dict[tuple[int, int], int] | None = None):
        self.p = p
        self.terms = {}
        for mono, c in (terms or {}).items():
            c %= p
            if c:
                self.terms[mono] = c

    @classmethod
    def from_dense(cls, p: int, rows) -> "SparsePoly":
        return cls(p, {(i, j): int(c) for i, row in enumerate(rows) for j, c in enumerate(row)})

    @classmethod
    def monomial(cls, p: int, i: int, j: int, c: int = 1) -> "SparsePoly":
        return cls(p, {(i, j): c})

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, 0) + c
        return SparsePoly(self.p, out)

    def __neg__(self) -> "SparsePoly":
        return SparsePoly(self.p, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return self + (-other)

    def __mul__(self, other) -> "SparsePoly":
        if isinstance(other, int):
            return SparsePoly(self.p, {m: c * other for m, c in self.terms.items()})
        out: dict[tuple[int, int], int] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0) + c1 * c2
        return SparsePoly(self.p, out)

    __rmul__ = __mul__

    def diff(self, var: int) -> "SparsePoly":
        out = {}
        for (i, j), c in self.terms.items():
            e = (i, j)[var]
            if e:
                out[(i - 1, j) if var == 0 else (i, j - 1)] = c * e
        return SparsePoly(self.p, out)

    def evaluate(self, a: int, b: int) -> int:
        p = self.p
        return sum(c * pow(a, i, p) * pow(b, j, p) for (i, j), c in self.terms.items()) % p

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, SparsePoly) and self.p == other.p and self.terms == other.terms

    def __repr__(self) -> str:
        return f"SparsePoly(p={self.p}, {len(self.terms)} terms)"


def _residue(p: int, q) -> int:
    q = Fraction(q)
    return q.numerator * pow(q.denominator, -1, p) % p


def gauss_operator(p: int, alpha, beta, gamma, var: int):
    """The Gauss operator as a callable on :class:`SparsePoly`."""
    a, b, g = (_residue(p, v) for v in (alpha, beta, gamma))
    z = SparsePoly.monomial(p, 1, 0) if var == 0 else SparsePoly.monomial(p, 0, 1)
    one = SparsePoly.monomial(p, 0, 0)
    c2 = z * (one - z)
    c1 = one * g - z * (a + b + 1)

    def apply(f: SparsePoly) -> SparsePoly:
        d = f.diff(var)
        return c2 * d.diff(var) + c1 * d - f * (a * b)

    return apply


def appell_operator(p: int, alpha, beta1, beta2, gamma1, gamma2, index: int):
    """``L^(1)`` (``index=1``) or ``L^(2)`` of the Appell ``F_2`` system."""
    a, b1, b2, g1, g2 = (_residue(p, v) for v in (alpha, beta1, beta2, gamma1, gamma2))
    one = SparsePoly.monomial(p, 0, 0)
    z1 = SparsePoly.monomial(p, 1, 0)
    z2 = SparsePoly.monomial(p, 0, 1)
    if index == 1:
        zs, zo, s, o, b, g = z1, z2, 0, 1, b1, g1
    else:
        zs, zo, s, o, b, g = z2, z1, 1, 0, b2, g2

    def apply(f: SparsePoly) -> SparsePoly:
        ds = f.diff(s)
        return (
            zs * (one - zs) * ds.diff(s)
            - z1 * z2 * ds.diff(o)
            + (one * g - zs * (a + b + 1)) * ds
            - zo * f.diff(o) * b
            - f * (a * b)
        )

    return apply
