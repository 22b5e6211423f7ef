"""Verification suites run by ``kummerlab verify``.

Every suite checks one family of congruences over a list of primes and
returns a :class:`SuiteResult`.  A suite whose grid (parameter tuples times
``p**2`` affine cells) exceeds :data:`EXHAUSTIVE_LIMIT` checks a seeded
random subset of parameters instead of the whole grid.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Callable

from . import counting, series
from .fpcore import binomial, get_context, power_sum, primes_up_to
from .models import (
    MAP_NAMES,
    AffinePoint,
    DenominatorVanishes,
    ModelId,
    ModelInstance,
    moduli_forward,
    point_map,
)
from .pfops import (
    AppellOperator,
    BiPoly,
    GaussOperator,
    Variable,
    apply_appell,
    apply_gauss,
    is_zero,
    poly_appell_truncated,
    poly_from_countX,
    poly_from_countZ,
    poly_trunc_2f1,
)
from .sparsepoly import SparsePoly, appell_operator, gauss_operator

EXHAUSTIVE_LIMIT = 10**6
CLAUSEN_TOLERANCE = 1e-10

SMALL_PRIMES = (3, 5, 7, 11, 13)

# Parameters (beta1, beta2) crossed with five points (k1, k2) inside the domain.
CLAUSEN_BETAS = ((0.5, 0.5), (0.5, 0.75), (0.75, 0.5), (0.75, 0.75))
CLAUSEN_POINTS = ((0.05, 1.05), (0.03, 0.95), (0.02, 1.0), (0.08, 1.1), (-0.05, 1.05))


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list[dict] = field(default_factory=list)
    wall_time: float = 0.0
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, **case) -> None:
        self.cases += 1
        if not ok:
            self.failures.append(case)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = "".join(f" {k}={v}" for k, v in self.notes.items())
        return f"{self.name}: {status} cases={self.cases} failures={len(self.failures)} time={self.wall_time:.3f}s{extra}"

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "failures": self.failures,
            "wall_time": round(self.wall_time, 6),
            "notes": self.notes,
        }


def _pairs(p: int, keep: Callable[[int, int], bool] | None = None) -> list[tuple[int, int]]:
    return [(a, b) for a, b in itertools.product(range(p), repeat=2) if keep is None or keep(a, b)]


def _maybe_sample(result: SuiteResult, p: int, grid: list, seed: int, cells: int) -> list:
    if len(grid) * cells <= EXHAUSTIVE_LIMIT:
        return grid
    size = max(1, EXHAUSTIVE_LIMIT // cells)
    result.notes[f"sampled_p{p}"] = size
    return counting.sample_parameters(grid, size, seed + p)


def suite_igusa(primes=None, seed: int = 0, **_) -> SuiteResult:
    res = SuiteResult("igusa")
    for p in primes or primes_up_to(101):
        ctx = get_context(p)
        for lam in range(p):
            m = ModelInstance(ModelId.LEGENDRE, p, (lam,))
            res.check(counting.count_exact(m) % p == series.igusa_count(ctx, lam), p=p, lam=lam)
    return res


def suite_countx(primes=None, seed: int = 0, **_) -> SuiteResult:
    res = SuiteResult("countx")
    for p in primes or SMALL_PRIMES:
        ctx = get_context(p)
        for l1, l2 in _maybe_sample(res, p, _pairs(p), seed, p * p):
            m = ModelInstance(ModelId.KUMMER_J6, p, (l1, l2))
            res.check(series.kummer_count_formula(ctx, l1, l2) == counting.count_euler(m), p=p, lam1=l1, lam2=l2)
    return res


def suite_countz(primes=None, seed: int = 0, **_) -> SuiteResult:
    res = SuiteResult("countz")
    for p in primes or SMALL_PRIMES:
        ctx = get_context(p)
        for z1, z2 in _maybe_sample(res, p, _pairs(p), seed, p * p):
            m = ModelInstance(ModelId.K3_Z, p, (z1, z2))
            res.check(series.trunc_appell_f2(ctx, z1, z2) == counting.count_euler(m), p=p, z1=z1, z2=z2)
    return res


def suite_identity(primes=None, seed: int = 0, **_) -> SuiteResult:
    res = SuiteResult("identity")
    for p in primes or SMALL_PRIMES:
        ctx = get_context(p)
        grid = _pairs(p, lambda a, b: (a + b) % p != 0)
        for k1, k2 in _maybe_sample(res, p, grid, seed, p * p):
            lhs, rhs = series.identity_sides(ctx, k1, k2)
            res.check(lhs == rhs, p=p, k1=k1, k2=k2, lhs=lhs, rhs=rhs)
        lhs, rhs = series.identity_sides(ctx, 1, 0)
        res.check(lhs == rhs == series.sign_N(ctx), p=p, k1=1, k2=0, lhs=lhs, rhs=rhs, anchor=True)
    return res


def suite_twist(primes=None, seed: int = 0, **_) -> SuiteResult:
    res = SuiteResult("twist")
    for p in primes or SMALL_PRIMES:
        ctx = get_context(p)
        grid = _pairs(p, lambda a, b: (a + b) % p != 0)
        for k1, k2 in _maybe_sample(res, p, grid, seed, p * p):
            pair = moduli_forward(ctx, k1, k2)
            y = counting.count_euler(ModelInstance(ModelId.K3_Y_GKZ, p, (k1, k2)))
            z = counting.count_euler(ModelInstance(ModelId.K3_Z, p, (pair.z1, pair.z2)))
            factor = pow(-(k1 + k2) ** 2, ctx.N, p)
            res.check(y == factor * z % p, p=p, k1=k1, k2=k2, form="gkz")
            if pair.lam1 != 1 and pair.lam2 != 1:
                yf = counting.count_euler(ModelInstance(ModelId.K3_Y, p, (pair.lam1, pair.lam2)))
                res.check(yf == y, p=p, k1=k1, k2=k2, form="f")
    return res


def suite_euler(primes=None, seed: int = 0, jobs: int = 1, **_) -> SuiteResult:
    res = SuiteResult("euler")
    for p in primes or SMALL_PRIMES:
        for model in ModelId:
            for r in counting.sweep(model, p, parallelism=jobs, with_formula=False):
                res.check(r.match, **r.row())
    return res


def _sparse_cross_check(ctx) -> list[str]:
    """Compare dense operator images against the sparse engine; returns mismatching labels."""
    p = ctx.p
    bad = []
    polys = {"countX": poly_from_countX(ctx), "countZ": poly_from_countZ(ctx)}
    ops = {
        "gauss1": (lambda f: apply_gauss(GaussOperator(variable=Variable.FIRST), f),
                   gauss_operator(p, 0.5, 0.5, 1, 0)),
        "gauss2": (lambda f: apply_gauss(GaussOperator(variable=Variable.SECOND), f),
                   gauss_operator(p, 0.5, 0.5, 1, 1)),
        "appell1": (lambda f: apply_appell(AppellOperator(index=1), f),
                    appell_operator(p, 0.5, 0.5, 0.5, 1, 1, 1)),
        "appell2": (lambda f: apply_appell(AppellOperator(index=2), f),
                    appell_operator(p, 0.5, 0.5, 0.5, 1, 1, 2)),
    }
    for pname, f in polys.items():
        # Perturb so the images are nonzero and the comparison has teeth.
        g = f + BiPoly(p, [[1, 2], [3, 4]])
        sg = SparsePoly.from_dense(p, g.coeffs.tolist())
        for oname, (dense, sparse) in ops.items():
            d = dense(g)
            s = sparse(sg)
            if SparsePoly.from_dense(p, d.coeffs.tolist()) != s:
                bad.append(f"{oname}({pname}+perturbation)")
    return bad


def suite_pf(primes=None, seed: int = 0, **_) -> SuiteResult:
    res = SuiteResult("pf")
    for p in primes or primes_up_to(37):
        ctx = get_context(p)
        X = poly_from_countX(ctx)
        Z = poly_from_countZ(ctx)
        T = poly_appell_truncated(ctx)
        for v in Variable:
            res.check(is_zero(apply_gauss(GaussOperator(variable=v), X)), p=p, claim=f"L_lam{v + 1} countX")
            res.check(is_zero(apply_gauss(GaussOperator(variable=v), poly_trunc_2f1(ctx, v))), p=p, claim=f"L trunc2F1 var{v + 1}")
        for i in (1, 2):
            res.check(is_zero(apply_appell(AppellOperator(index=i), Z)), p=p, claim=f"L{i} countZ")
            res.check(is_zero(apply_appell(AppellOperator(index=i), T)), p=p, claim=f"L{i} truncated F2")
        res.check(T == Z, p=p, claim="truncated F2 == countZ polynomial")
        if p <= 7:
            for label in _sparse_cross_check(ctx):
                res.failures.append({"p": p, "claim": f"sparse cross-check {label}"})
            res.cases += 1
    return res


def suite_clausen(primes=None, seed: int = 0, **_) -> SuiteResult:
    res = SuiteResult("clausen")
    worst = 0.0
    for (b1, b2), (k1, k2) in itertools.product(CLAUSEN_BETAS, CLAUSEN_POINTS):
        r = series.clausen_residual(b1, b2, k1, k2)
        worst = max(worst, r)
        res.check(r < CLAUSEN_TOLERANCE, beta1=b1, beta2=b2, k1=k1, k2=k2, residual=r)
    res.notes["max_residual"] = f"{worst:.3e}"
    return res


def _source_points(m: ModelInstance):
    ctx = m.ctx
    for b in range(m.p):
        for f in range(m.p):
            for h in ctx.sqrts(m.rhs(b, f)):
                yield AffinePoint(b, f, h)


def check_map(name: str, source: ModelInstance) -> tuple[int, int, list[AffinePoint]]:
    """Apply a named map to every on-model point of ``source``.

    Returns ``(mapped, skipped, violations)``.
    """
    _, fn, target_of = point_map(name)
    target = target_of(source)
    mapped = skipped = 0
    violations = []
    for pt in _source_points(source):
        try:
            img = fn(source, pt)
        except DenominatorVanishes:
            skipped += 1
            continue
        mapped += 1
        if not target.on_model(img):
            violations.append(pt)
    return mapped, skipped, violations


def suite_covers(primes=None, seed: int = 0, pairs: int = 20, **_) -> SuiteResult:
    res = SuiteResult("covers")
    skipped_total = 0
    for p in primes or (11, 13):
        grid = _pairs(p, lambda a, b: a not in (0, 1) and b not in (0, 1))
        chosen = counting.sample_parameters(grid, pairs, seed + p)
        for l1, l2 in chosen:
            for name in MAP_NAMES:
                src_model = point_map(name)[0]
                mapped, skipped, bad = check_map(name, ModelInstance(src_model, p, (l1, l2)))
                skipped_total += skipped
                res.check(not bad and mapped > 0, p=p, lam1=l1, lam2=l2, map=name, violations=[tuple(v) for v in bad[:5]])
    res.notes["skipped_points"] = skipped_total
    return res


def suite_combinatorics(primes=None, seed: int = 0, **_) -> SuiteResult:
    res = SuiteResult("combinatorics")
    for p in primes or primes_up_to(101):
        ctx = get_context(p)
        res.check(ctx.factorials[p - 1] == p - 1, p=p, claim="wilson")
        for k in range(2 * (p - 1) + 1):
            expected = p - 1 if k > 0 and k % (p - 1) == 0 else 0
            res.check(power_sum(ctx, k) == expected, p=p, k=k, claim="power sum")
        central = sum(binomial(ctx, ctx.N, i) ** 2 for i in range(ctx.N + 1)) % p
        res.check(central == series.sign_N(ctx), p=p, claim="central binomial")
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "igusa": suite_igusa,
    "countx": suite_countx,
    "countz": suite_countz,
    "identity": suite_identity,
    "pf": suite_pf,
    "clausen": suite_clausen,
    "covers": suite_covers,
    "twist": suite_twist,
    "euler": suite_euler,
    "combinatorics": suite_combinatorics,
}


def run_suite(name: str, primes=None, seed: int = 0, jobs: int = 1) -> SuiteResult:
    start = time.perf_counter()
    res = SUITES[name](primes=primes, seed=seed, jobs=jobs)
    res.wall_time = time.perf_counter() - start
    return res
