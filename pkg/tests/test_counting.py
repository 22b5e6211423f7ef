import io
import itertools
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kummerlab import counting, series
from kummerlab.counting import (
    CSV_HEADER,
    CountReport,
    count_brute_force,
    count_euler,
    count_exact,
    count_formula,
    parameter_grid,
    render_reports,
    sample_parameters,
    sweep,
)
from kummerlab.fpcore import KummerlabError, get_context
from kummerlab.models import ModelId, ModelInstance


def test_frozen_examples():
    assert count_euler(ModelInstance.of("kummer-j6", 5, 2, 0)) == 3
    assert count_euler(ModelInstance.of("k3-z", 7, 0, 0)) == 1


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("model", list(ModelId))
def test_exact_matches_brute_force(model, p):
    for params in parameter_grid(model, p):
        m = ModelInstance(model, p, params)
        assert count_exact(m) == count_brute_force(m), params


instances = st.sampled_from([17, 19, 23, 29, 31]).flatmap(
    lambda p: st.tuples(st.sampled_from(list(ModelId)), st.just(p), st.integers(0, p - 1), st.integers(0, p - 1))
)


@given(instances)
def test_euler_and_formula_agree_with_exact(args):
    model, p, a, b = args
    params = (a, b)[: len(model.param_names)]
    if not counting.admissible(model, p, params):
        return
    m = ModelInstance(model, p, params)
    assert count_exact(m) % p == count_euler(m)
    assert count_formula(m) == count_euler(m)


def test_multi_block_grid():
    # p large enough that the grid is processed in several row blocks.
    p = 1031
    m = ModelInstance.of("k3-z", p, 5, 17)
    assert count_exact(m) % p == count_euler(m) == series.trunc_appell_f2(get_context(p), 5, 17)


def test_legendre_hasse_bound():
    p = 101
    for lam in range(2, p):
        n = count_exact(ModelInstance.of("legendre", p, lam))
        assert abs(n - p) <= 2 * p**0.5


def test_report_rows():
    r = counting.report(ModelInstance.of("kummer-j6", 5, 2, 3))
    row = r.row()
    assert tuple(row) == CSV_HEADER
    assert row["exact"] == 26 and row["euler"] == 1 and row["match"] is True
    assert r.csv_fields() == ["kummer-j6", "5", "2", "3", "26", "1", "1", "true", "0"]
    assert list(json.loads(r.to_json())) == list(CSV_HEADER)
    curve = counting.report(ModelInstance.of("legendre", 5, 2), with_formula=False)
    assert curve.csv_fields()[3] == "" and curve.csv_fields()[6] == ""


def test_report_mismatch():
    m = ModelInstance.of("k3-z", 5, 1, 1)
    good = counting.report(m)
    assert not CountReport(m, good.exact_count, good.euler_sum, (good.euler_sum + 1) % 5).match
    assert not CountReport(m, good.exact_count + 1, good.euler_sum).match


def test_render_formats():
    reps = list(sweep("legendre", 5))
    csv_text = render_reports(reps, "csv")
    assert csv_text.splitlines()[0] == ",".join(CSV_HEADER)
    assert len(csv_text.splitlines()) == 6
    lines = render_reports(reps, "jsonl").splitlines()
    assert [json.loads(x)["param1"] for x in lines] == [0, 1, 2, 3, 4]
    with pytest.raises(KummerlabError):
        counting.write_reports(reps, io.StringIO(), "xml")


def test_parameter_grid_order_and_admissibility():
    grid = list(parameter_grid(ModelId.K3_Y, 5))
    assert grid == sorted(grid)
    assert all(1 not in g for g in grid) and len(grid) == 16
    assert len(list(parameter_grid(ModelId.K3_Y_GKZ, 5))) == 20


def test_sweep_examples():
    reps = list(sweep("k3-z", 5))
    assert len(reps) == 25 and all(r.match for r in reps)
    keep = lambda t: all(v not in (0, 1) for v in t)
    assert len(list(sweep(ModelId.KUMMER_J6, 7, keep))) == 25


def test_sample_parameters_deterministic():
    grid = list(itertools.product(range(13), repeat=2))
    a = sample_parameters(grid, 50, 42)
    assert a == sample_parameters(grid, 50, 42)
    assert len(set(a)) == 50 and a == sorted(a)
    assert a != sample_parameters(grid, 50, 43)
    assert sample_parameters(grid, 500, 1) == grid


def test_sweep_parallel_matches_serial():
    serial = [r.row() for r in sweep("kummer-j6", 11, sample=30, seed=7)]
    parallel = [r.row() for r in sweep("kummer-j6", 11, parallelism=2, sample=30, seed=7)]
    assert serial == parallel and len(serial) == 30


def test_sweep_streams_lazily():
    it = sweep("k3-z", 13)
    first = next(it)
    assert first.model.params == (0, 0)
