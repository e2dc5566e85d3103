import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import float_crossings
from pancake_lab.arrangement import build
from pancake_lab.constructions import best_known
from pancake_lab.formulas import crossing_bound, region_upper_bound
from pancake_lab.optimizer import (
    SEARCHABLE, SearchConfig, _State, _random_params, exact_regions, float_parts, params_to_pose, score,
    search, verify_conjecture,
)
from pancake_lab.shapes import ShapeKind as K, instantiate


@pytest.mark.parametrize("kind,n", [(K.TBAR, 2), (K.TBAR, 4), (K.ABAR, 2), (K.ABAR, 3), (K.LOLLIPOP, 3),
                                    (K.FIGURE8, 2)])
def test_score_matches_exact_crossings_on_stored_figures(kind, n):
    insts = best_known(kind, n).instances
    vc, margin = score(insts)
    assert vc == len(build(insts).records)
    assert margin > 0


def test_score_on_two_t_bars_from_the_nineteen_region_figure():
    insts = best_known(K.TBAR, 3).instances[:2]
    assert score(insts)[0] == 4


@settings(max_examples=60)
@given(st.sampled_from(SEARCHABLE), st.integers(2, 4), st.integers(0, 10_000))
def test_random_poses_stay_within_the_bounds(kind, n, seed):
    rng = random.Random(seed)
    params = [_random_params(kind, rng) for _ in range(n)]
    vc, _ = _State(kind, params).evaluate()
    assert vc <= crossing_bound(kind, None, n)
    insts = [instantiate(kind, params_to_pose(kind, p), id=i) for i, p in enumerate(params)]
    assert score(insts)[0] == vc
    R, exact_vc, clean = exact_regions(kind, [params_to_pose(kind, p) for p in params])
    assert exact_vc <= crossing_bound(kind, None, n)
    assert R <= region_upper_bound(kind, None, n)
    if clean:
        assert exact_vc == float_crossings(insts)


@settings(max_examples=40)
@given(st.sampled_from(SEARCHABLE), st.integers(0, 10_000))
def test_incremental_trial_equals_full_recount(kind, seed):
    rng = random.Random(seed)
    params = [_random_params(kind, rng) for _ in range(4)]
    state = _State(kind, params)
    new = _random_params(kind, rng)
    vc, margin, changed, parts = state.trial(2, new)
    fresh = _State(kind, params[:2] + [new] + params[3:]).evaluate()
    assert (vc, margin) == fresh
    state.commit(2, new, changed, parts)
    assert state.evaluate() == fresh


def test_float_parts_of_a_t_bar():
    prims, bases = float_parts(K.TBAR, [1.0, 2.0, 0.0])
    assert bases == [(1.0, 2.0)]
    assert [p[0] for p in prims] == ["ray", "ray", "ray"]
    assert prims[2][3:] == (0.0, -1.0)


@pytest.mark.parametrize("kwargs,message", [
    ({"kind": K.LINE, "n": 2}, "search supports"),
    ({"kind": K.TBAR, "n": 2, "restarts": 0}, "restarts"),
    ({"kind": K.TBAR, "n": 2, "cooling": 1.0}, "cooling"),
    ({"kind": K.TBAR, "n": 2, "margin": 0}, "margin"),
    ({"kind": K.TBAR, "n": 0}, "positive"),
])
def test_config_validation(kwargs, message):
    with pytest.raises(ValueError, match=message):
        SearchConfig(**kwargs)


@pytest.mark.parametrize("kind,n,want", [(K.TBAR, 1, 3), (K.TBAR, 2, 9), (K.ABAR, 1, 3), (K.LOLLIPOP, 2, 10),
                                         (K.FIGURE8, 2, 12)])
def test_small_searches_reach_the_optimum(kind, n, want):
    res = search(SearchConfig(kind, n, restarts=4, steps=5000, seed=0))
    assert res.exact and res.regions == want
    assert exact_regions(kind, res.poses)[0] == want


def test_same_seed_same_result():
    cfg = SearchConfig(K.TBAR, 3, restarts=2, steps=1500, seed=7, patience=500)
    a, b = search(cfg), search(cfg)
    assert a == b and a.report() == b.report()


def test_different_seeds_give_different_walks():
    a = search(SearchConfig(K.ABAR, 2, restarts=1, steps=300, seed=1))
    b = search(SearchConfig(K.ABAR, 2, restarts=1, steps=300, seed=2))
    assert a.poses != b.poses


def test_parallel_and_serial_runs_agree():
    cfg = dict(kind=K.LOLLIPOP, n=2, restarts=3, steps=2000, seed=3)
    assert search(SearchConfig(**cfg, workers=1)).poses == search(SearchConfig(**cfg, workers=2)).poses


def test_stop_at_ends_early():
    res = search(SearchConfig(K.TBAR, 3, restarts=3, steps=20_000, seed=0, stop_at=15))
    assert res.regions >= 15 and res.restart == 0
    assert len(res.trace) < 20


def test_verify_conjecture_rows():
    rows = verify_conjecture(K.TBAR, 2, {"restarts": 2, "steps": 3000})
    assert [(r["n"], r["best"], r["value"], r["gap"]) for r in rows] == [(1, 3, 3, 0), (2, 9, 9, 0)]
    assert all(r["best"] <= r["bound"] for r in rows)
