"""Affine models of the Legendre, Kummer and K3 families over F_p.

Each model is a double cover ``height**2 = G(base, fiber)`` of an affine
chart; :meth:`ModelInstance.rhs` evaluates ``G`` exactly.  The evaluators
accept Python integers or integer numpy arrays (reducing mod ``p`` after
every product) so the counting kernels can evaluate a whole row of the grid
in one call.

The rational maps between models are exact on points.  Points on the
indeterminacy locus raise :class:`DenominatorVanishes` naming the factor
that vanished; callers are expected to skip and tally them.
"""

from __future__ import annotations

import enum
import functools
import operator
from dataclasses import dataclass, field
from typing import NamedTuple

from .fpcore import DomainError, KummerlabError, PrimeContext, get_context


class DenominatorVanishes(KummerlabError, ZeroDivisionError):
    """A rational map was evaluated on its indeterminacy locus."""

    def __init__(self, which: str):
        super().__init__(f"denominator {which} vanishes")
        self.which = which


class UndefinedModuli(DenominatorVanishes):
    """``k1 + k2 = 0``: the pole of the moduli map."""

    def __init__(self):
        super().__init__("k1+k2")


class ModelId(enum.Enum):
    """Tag of an affine model; the value is the name used on the CLI and in reports."""

    LEGENDRE = "legendre"
    KUMMER_J4 = "kummer-j4"
    KUMMER_J6 = "kummer-j6"
    KUMMER_J6_TILDE = "kummer-j6-tilde"
    K3_Y = "k3-y"
    K3_Y_GKZ = "k3-y-gkz"
    K3_Z = "k3-z"
    RATIONAL_S = "rational-s"

    @property
    def param_names(self) -> tuple[str, ...]:
        return _PARAM_NAMES[self]

    @property
    def dimension(self) -> int:
        """Number of affine coordinates besides the height (1 for curves, 2 for surfaces)."""
        return 1 if self is ModelId.LEGENDRE else 2

    @classmethod
    def from_tag(cls, tag: str) -> "ModelId":
        try:
            return cls(tag)
        except ValueError:
            names = ", ".join(m.value for m in cls)
            raise DomainError(f"unknown model {tag!r}; expected one of {names}") from None


_LAMBDA_PAIR = ("lam1", "lam2")
_PARAM_NAMES = {
    ModelId.LEGENDRE: ("lam",),
    ModelId.KUMMER_J4: _LAMBDA_PAIR,
    ModelId.KUMMER_J6: _LAMBDA_PAIR,
    ModelId.KUMMER_J6_TILDE: _LAMBDA_PAIR,
    ModelId.K3_Y: _LAMBDA_PAIR,
    ModelId.K3_Y_GKZ: ("k1", "k2"),
    ModelId.K3_Z: ("z1", "z2"),
    ModelId.RATIONAL_S: _LAMBDA_PAIR,
}


class AffinePoint(NamedTuple):
    base: int
    fiber: int
    height: int


def _prod(p, *factors):
    r = factors[0] % p
    for f in factors[1:]:
        r = r * f % p
    return r


@dataclass(frozen=True)
class ModelInstance:
    """A model tag together with its parameters reduced mod ``p``.

    Only ``K3_Y`` rejects parameters (``lam_i = 1`` makes its coefficient
    polynomial undefined) and ``K3_Y_GKZ`` rejects ``k1 + k2 = 0``; every
    other degenerate value is accepted and reported by :attr:`degenerate`.
    """

    model: ModelId
    p: int
    params: tuple[int, ...]
    _consts: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        model = self.model if isinstance(self.model, ModelId) else ModelId.from_tag(self.model)
        ctx = get_context(self.p)
        params = tuple(operator.index(v) % ctx.p for v in self.params)
        if len(params) != len(model.param_names):
            raise DomainError(
                f"{model.value} takes {len(model.param_names)} parameters "
                f"{model.param_names}, got {len(params)}"
            )
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "_consts", _constants(model, ctx, params))

    @classmethod
    def of(cls, tag: str | ModelId, p: int, *params: int) -> "ModelInstance":
        return cls(tag if isinstance(tag, ModelId) else ModelId.from_tag(tag), p, tuple(params))

    @property
    def ctx(self) -> PrimeContext:
        return get_context(self.p)

    @property
    def named_params(self) -> dict[str, int]:
        return dict(zip(self.model.param_names, self.params))

    @property
    def degenerate(self) -> bool:
        """True for parameters where the generic geometry breaks down (lam in {0, 1}, lam1 = lam2, ...)."""
        a, *rest = self.params
        if self.model is ModelId.LEGENDRE:
            return a in (0, 1)
        b = rest[0]
        if self.model is ModelId.K3_Z:
            return a == 0 or b == 0 or (a + b) % self.p == 1
        if self.model is ModelId.K3_Y_GKZ:
            a, b = a * a % self.p, b * b % self.p
        return a in (0, 1) or b in (0, 1) or a == b

    def with_model(self, model: ModelId) -> "ModelInstance":
        return ModelInstance(model, self.p, self.params)

    def swapped(self) -> "ModelInstance":
        return ModelInstance(self.model, self.p, tuple(reversed(self.params)))

    def rhs(self, base, fiber=0):
        """Right-hand side ``G(base, fiber)`` mod ``p``; ``fiber`` is ignored for curves."""
        return _RHS[self.model](self.p, self._consts, base, fiber)

    def on_model(self, pt: AffinePoint) -> bool:
        p = self.p
        return (pt.height * pt.height - self.rhs(pt.base, pt.fiber)) % p == 0

    def to_dict(self) -> dict:
        return {"model": self.model.value, "p": self.p, "params": self.named_params}

    @classmethod
    def from_dict(cls, data: dict) -> "ModelInstance":
        model = ModelId.from_tag(data["model"])
        given = data["params"]
        missing = [n for n in model.param_names if n not in given]
        if missing:
            raise DomainError(f"missing parameters {missing} for {model.value}")
        return cls(model, int(data["p"]), tuple(int(given[n]) for n in model.param_names))


def _constants(model: ModelId, ctx: PrimeContext, params: tuple[int, ...]) -> tuple:
    p = ctx.p
    if model is ModelId.LEGENDRE:
        return params
    a, b = params
    if model is ModelId.K3_Y:
        c = (1 - a) * (1 - b) % p
        if c == 0:
            which = "1-lam1" if a == 1 else "1-lam2"
            raise DomainError(f"k3-y needs lam1 != 1 and lam2 != 1 ({which} = 0)")
        return (c, 2 * (a + b) % p, (a - b) ** 2 * ctx.inv(c) % p)
    if model is ModelId.K3_Y_GKZ:
        s = (a + b) % p
        if s == 0:
            raise UndefinedModuli()
        pair = moduli_forward(ctx, a, b)
        return (s * s % p, pair.z1, pair.z2)
    if model in (ModelId.RATIONAL_S, ModelId.KUMMER_J6_TILDE):
        return (a, b, (1 - a) * (1 - b) % p)
    return params


def _rhs_legendre(p, c, x, _):
    (lam,) = c
    return _prod(p, x, x - 1, x - lam)


def _rhs_j4(p, c, x1, x2):
    l1, l2 = c
    return _prod(p, x1, x1 - 1, x1 - l1, x2, x2 - 1, x2 - l2)


def _rhs_j6(p, c, t, X):
    l1, l2 = c
    a = _prod(p, t, t - 1, l2 * t - l1)
    b = _prod(p, t, t - l1, l2 * t - 1)
    return _prod(p, X, X - a, X - b)


def _rhs_j6_tilde(p, c, t, X):
    # c*t^2*X*(1-X)*(X - (t-1)(l2 t - l1)/(c t)) with the division cleared.
    l1, l2, k = c
    inner = _prod(p, k, t, X) - _prod(p, t - 1, l2 * t - l1)
    return _prod(p, t, X, 1 - X, inner)


def _rhs_k3_y(p, c, u, x):
    k, b1, b0 = c
    f = (_prod(p, k, u, u) + b1 * u + b0) % p
    return _prod(p, f, x, 1 - x, x - u)


def _rhs_k3_y_gkz(p, c, v, x):
    s2, z1, z2 = c
    return _prod(p, s2, v, 1 - v, x, x - 1, 1 - z2 * x - z1 * v)


def _rhs_k3_z(p, c, v, x):
    z1, z2 = c
    return _prod(p, v, 1 - v, x, 1 - x, 1 - z2 * x - z1 * v)


def _rhs_rational_s(p, c, u, x):
    k = c[2]
    return _prod(p, k, x, 1 - x, x - u)


_RHS = {
    ModelId.LEGENDRE: _rhs_legendre,
    ModelId.KUMMER_J4: _rhs_j4,
    ModelId.KUMMER_J6: _rhs_j6,
    ModelId.KUMMER_J6_TILDE: _rhs_j6_tilde,
    ModelId.K3_Y: _rhs_k3_y,
    ModelId.K3_Y_GKZ: _rhs_k3_y_gkz,
    ModelId.K3_Z: _rhs_k3_z,
    ModelId.RATIONAL_S: _rhs_rational_s,
}


def rhs_eval(m: ModelInstance, base, fiber=0):
    return m.rhs(base, fiber)


@dataclass(frozen=True)
class ModuliPair:
    """Square roots ``k1, k2`` of the Legendre parameters and the matching ``(z1, z2)``."""

    k1: int
    k2: int
    z1: int
    z2: int
    lam1: int
    lam2: int


def moduli_forward(ctx: PrimeContext, k1, k2) -> ModuliPair:
    """``z1 = 4 k1 k2 / (k1 + k2)^2``, ``z2 = -(k1^2 - 1)(k2^2 - 1) / (k1 + k2)^2``."""
    p = ctx.p
    k1 = operator.index(k1) % p
    k2 = operator.index(k2) % p
    s = (k1 + k2) % p
    if s == 0:
        raise UndefinedModuli()
    d = ctx.inv(s * s)
    lam1, lam2 = k1 * k1 % p, k2 * k2 % p
    z1 = 4 * k1 * k2 * d % p
    z2 = -(lam1 - 1) * (lam2 - 1) * d % p
    return ModuliPair(k1, k2, z1, z2, lam1, lam2)


def _inv_or_raise(ctx: PrimeContext, value: int, which: str) -> int:
    value %= ctx.p
    if value == 0:
        raise DenominatorVanishes(which)
    return ctx.inv(value)


def _require(m: ModelInstance, *models: ModelId) -> None:
    if m.model not in models:
        names = ", ".join(x.value for x in models)
        raise DomainError(f"expected a {names} instance, got {m.model.value}")


def j4_to_j6(m: ModelInstance, pt: AffinePoint) -> AffinePoint:
    """Birational change of fibration from the double Kummer pencil to the tilde J6 chart.

    The image lies on ``m.with_model(ModelId.KUMMER_J6_TILDE)``.
    """
    _require(m, ModelId.KUMMER_J4)
    ctx, p = m.ctx, m.p
    l1, l2 = m.params
    x1, x2, y12 = (v % p for v in pt)
    i_x2 = _inv_or_raise(ctx, x2, "x2")
    i_x1 = _inv_or_raise(ctx, x1, "x1")
    i_l2x2 = _inv_or_raise(ctx, l2 - x2, "lam2-x2")
    i_l1 = _inv_or_raise(ctx, 1 - l1, "1-lam1")
    t = x1 * i_x2 % p
    shared = (l1 * x2 - l2 * x1) % p
    X = _prod(p, x1 - 1, shared, i_x1, i_l2x2, i_l1)
    Y = _prod(p, l2 * x1 - x2, shared, y12, i_x1, i_x2, i_x2, i_l2x2, i_l2x2, i_l1)
    return AffinePoint(t, X, Y)


def psi_base(m: ModelInstance, t) -> int:
    """Degree-two base map ``u = (t - 1)(lam2 t - lam1) / ((1 - lam1)(1 - lam2) t)``."""
    ctx, p = m.ctx, m.p
    l1, l2 = m.params
    t %= p
    i_t = _inv_or_raise(ctx, t, "t")
    i_1 = _inv_or_raise(ctx, 1 - l1, "1-lam1")
    i_2 = _inv_or_raise(ctx, 1 - l2, "1-lam2")
    return _prod(p, t - 1, l2 * t - l1, i_1, i_2, i_t)


def cover_to_Y(m: ModelInstance, pt: AffinePoint) -> AffinePoint:
    """Double cover from the tilde J6 chart onto ``K3_Y``."""
    _require(m, ModelId.KUMMER_J6_TILDE)
    ctx, p = m.ctx, m.p
    l1, l2 = m.params
    t, X, Y = (v % p for v in pt)
    u = psi_base(m, t)
    c_inv = ctx.inv((1 - l1) * (1 - l2))
    i_t = ctx.inv(t)
    y = _prod(p, l2 * t * t - l1, Y, c_inv, i_t, i_t)
    return AffinePoint(u, X, y)


def cover_to_S(m: ModelInstance, pt: AffinePoint) -> AffinePoint:
    """Double cover from the tilde J6 chart onto the rational surface ``RATIONAL_S``."""
    _require(m, ModelId.KUMMER_J6_TILDE)
    p = m.p
    t, X, Y = (v % p for v in pt)
    u = psi_base(m, t)
    return AffinePoint(u, X, Y * m.ctx.inv(t) % p)


def j6_param_swap(m: ModelInstance, pt: AffinePoint) -> AffinePoint:
    """``(t, X, Y) -> (1/t, X/t^4, -Y/t^6)``; the image lies on ``m.swapped()``."""
    _require(m, ModelId.KUMMER_J6)
    ctx, p = m.ctx, m.p
    t, X, Y = (v % p for v in pt)
    i_t = _inv_or_raise(ctx, t, "t")
    i_t2 = i_t * i_t % p
    i_t4 = i_t2 * i_t2 % p
    return AffinePoint(i_t, X * i_t4 % p, -Y * i_t4 * i_t2 % p)


@functools.lru_cache(maxsize=None)
def _map_table():
    return {
        "j4_to_j6": (ModelId.KUMMER_J4, j4_to_j6, lambda m: m.with_model(ModelId.KUMMER_J6_TILDE)),
        "cover_to_Y": (ModelId.KUMMER_J6_TILDE, cover_to_Y, lambda m: m.with_model(ModelId.K3_Y)),
        "cover_to_S": (ModelId.KUMMER_J6_TILDE, cover_to_S, lambda m: m.with_model(ModelId.RATIONAL_S)),
        "j6_param_swap": (ModelId.KUMMER_J6, j6_param_swap, lambda m: m.swapped()),
    }


MAP_NAMES = ("j4_to_j6", "cover_to_Y", "cover_to_S", "j6_param_swap")


def point_map(name: str):
    """``(source model id, map function, target-instance builder)`` for a named map."""
    try:
        return _map_table()[name]
    except KeyError:
        raise DomainError(f"unknown map {name!r}; expected one of {MAP_NAMES}") from None
