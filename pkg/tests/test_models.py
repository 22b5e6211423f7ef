import itertools
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SMALL_PRIMES
from kummerlab.fpcore import DomainError, get_context
from kummerlab.models import (
    MAP_NAMES,
    AffinePoint,
    DenominatorVanishes,
    ModelId,
    ModelInstance,
    UndefinedModuli,
    j4_to_j6,
    j6_param_swap,
    moduli_forward,
    point_map,
    psi_base,
)


def on_model_points(m):
    ctx = m.ctx
    fibers = range(m.p) if m.model.dimension == 2 else (0,)
    for b in range(m.p):
        for f in fibers:
            for h in ctx.sqrts(m.rhs(b, f)):
                yield AffinePoint(b, f, h)


def test_frozen_examples():
    assert ModelInstance.of("k3-z", 7, 0, 0).rhs(2, 3) == 5
    pair = moduli_forward(get_context(7), 2, 3)
    assert (pair.z1, pair.z2) == (6, 1)
    assert (pair.lam1, pair.lam2) == (4, 2)
    assert psi_base(ModelInstance.of("kummer-j6-tilde", 13, 3, 5), 2) == 11


def test_rhs_formulas_by_hand():
    # Legendre: x(x-1)(x-lam)
    assert ModelInstance.of("legendre", 11, 3).rhs(5) == 5 * 4 * 2 % 11
    # J4: x1(x1-1)(x1-l1) x2(x2-1)(x2-l2)
    assert ModelInstance.of("kummer-j4", 11, 2, 3).rhs(4, 5) == (4 * 3 * 2) * (5 * 4 * 2) % 11
    # K3Z: v(1-v) x(1-x)(1 - z2 x - z1 v)
    assert ModelInstance.of("k3-z", 11, 2, 3).rhs(4, 5) == 4 * (-3) * 5 * (-4) * (1 - 15 - 8) % 11


@pytest.mark.parametrize("model", list(ModelId))
def test_rhs_scalar_matches_numpy(model):
    p = 13
    m = ModelInstance(model, p, (2, 5)[: len(model.param_names)])
    base = np.arange(p)[:, None]
    fiber = np.arange(p)[None, :]
    grid = np.asarray(m.rhs(base, fiber)) % p
    for b, f in itertools.product(range(p), repeat=2):
        expected = m.rhs(b, f if model.dimension == 2 else 0)
        assert grid[b, f if model.dimension == 2 else 0] == expected


def test_serialization_round_trip():
    m = ModelInstance.of("kummer-j6", 11, 14, 3)
    d = m.to_dict()
    assert d == {"model": "kummer-j6", "p": 11, "params": {"lam1": 3, "lam2": 3}}
    assert ModelInstance.from_dict(json.loads(json.dumps(d))) == m
    with pytest.raises(DomainError):
        ModelInstance.from_dict({"model": "k3-z", "p": 5, "params": {"z1": 1}})


def test_validation():
    with pytest.raises(DomainError):
        ModelInstance.of("no-such-model", 5, 1)
    with pytest.raises(DomainError):
        ModelInstance.of("k3-z", 5, 1)
    with pytest.raises(DomainError):
        ModelInstance.of("k3-y", 7, 1, 3)
    with pytest.raises(UndefinedModuli):
        ModelInstance.of("k3-y-gkz", 7, 2, 5)
    with pytest.raises(DomainError):
        ModelInstance.of("kummer-j6", 4, 1, 2)


def test_degenerate_flags():
    assert ModelInstance.of("legendre", 7, 1).degenerate
    assert not ModelInstance.of("legendre", 7, 3).degenerate
    assert ModelInstance.of("kummer-j6", 7, 3, 3).degenerate
    assert ModelInstance.of("k3-z", 7, 3, 5).degenerate  # z1 + z2 = 1
    assert not ModelInstance.of("k3-z", 7, 3, 3).degenerate


def test_moduli_undefined():
    with pytest.raises(UndefinedModuli):
        moduli_forward(get_context(7), 3, 4)


@pytest.mark.parametrize("p", [5, 7, 11])
def test_moduli_identity_z1_z2(p):
    ctx = get_context(p)
    for k1, k2 in itertools.product(range(p), repeat=2):
        if (k1 + k2) % p == 0:
            continue
        pair = moduli_forward(ctx, k1, k2)
        s2 = (k1 + k2) ** 2
        assert pair.z1 * s2 % p == 4 * k1 * k2 % p
        assert pair.z2 * s2 % p == -(k1 * k1 - 1) * (k2 * k2 - 1) % p
        other = moduli_forward(ctx, k2, k1)
        assert (other.z1, other.z2) == (pair.z1, pair.z2)


lam_pairs = st.sampled_from([11, 13, 17]).flatmap(
    lambda p: st.tuples(st.just(p), st.integers(2, p - 1), st.integers(2, p - 1))
)


@given(lam_pairs, st.sampled_from(MAP_NAMES))
def test_maps_send_points_to_target(args, name):
    p, l1, l2 = args
    src_model, fn, target_of = point_map(name)
    src = ModelInstance(src_model, p, (l1, l2))
    target = target_of(src)
    mapped = 0
    for pt in on_model_points(src):
        try:
            img = fn(src, pt)
        except DenominatorVanishes:
            continue
        mapped += 1
        assert target.on_model(img), (pt, img)
    assert mapped > 0


def test_map_detects_off_model_points():
    # An off-model source point must land off the target: the maps are birational on their domains.
    p = 13
    src = ModelInstance.of("kummer-j6", p, 3, 5)
    pt = next(AffinePoint(t, x, 1) for t in range(1, p) for x in range(p) if not src.on_model(AffinePoint(t, x, 1)))
    assert not src.swapped().on_model(j6_param_swap(src, pt))


def test_swap_is_involution():
    p = 11
    m = ModelInstance.of("kummer-j6", p, 3, 7)
    for pt in on_model_points(m):
        if pt.base == 0:
            continue
        assert j6_param_swap(m.swapped(), j6_param_swap(m, pt)) == pt


def test_indeterminacy_raises():
    m = ModelInstance.of("kummer-j4", 11, 3, 5)
    with pytest.raises(DenominatorVanishes) as err:
        j4_to_j6(m, AffinePoint(1, 0, 0))
    assert err.value.which == "x2"
    with pytest.raises(DenominatorVanishes):
        j6_param_swap(ModelInstance.of("kummer-j6", 11, 3, 5), AffinePoint(0, 1, 0))


def test_map_rejects_wrong_model():
    with pytest.raises(DomainError):
        j4_to_j6(ModelInstance.of("k3-z", 7, 1, 2), AffinePoint(1, 1, 1))
    with pytest.raises(DomainError):
        point_map("nope")


@pytest.mark.parametrize("p", SMALL_PRIMES[2:])
def test_psi_base_is_two_to_one(p):
    l1, l2 = 2, 3 if p != 3 else 2
    m = ModelInstance.of("kummer-j6-tilde", p, l1, l2)
    ctx = m.ctx
    for t in range(1, p):
        partner = l1 * ctx.inv(l2 * t) % p
        assert psi_base(m, t) == psi_base(m, partner)
    images = [psi_base(m, t) for t in range(1, p)]
    assert max(images.count(u) for u in set(images)) <= 2
