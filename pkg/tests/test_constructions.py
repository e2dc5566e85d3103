import math

import pytest
from hypothesis import given, settings, strategies as st

from helpers import table2
from pancake_lab.arrangement import CONSISTENT, OPTIMAL_CONFIRMED, build, count_regions_faces, verify
from pancake_lab.constructions import (
    NotStored, a_to_chain, a_to_kv, best_known, construct, pancake_hosts, repair,
)
from pancake_lab.formulas import crossing_bound
from pancake_lab.shapes import ShapeKind as K


def regions(con):
    return count_regions_faces(build(con.instances)).R


@pytest.mark.parametrize("kind,k,n,want", [
    (K.LINE, None, 5, 16), (K.LONG_A, None, 2, 14), (K.KCHAIN, 3, 3, 34), (K.LONG_W, None, 2, 19),
    (K.LBAR, None, 5, 36), (K.XBAR, None, 3, 22), (K.POLYGON, 8, 2, 18), (K.CONCAVE_QUAD, None, 2, 18),
    (K.CIRCLE, None, 4, 14), (K.PENTAGRAM, None, 3, 77), (K.HEXAGRAM, None, 1, 8), (K.PENTAGRAM, None, 1, 7),
    (K.LONG_Z, None, 2, 12), (K.HATPIN, None, 4, 7),
])
def test_figure_values(kind, k, n, want):
    con = construct(kind, n, k)
    out = verify(kind, k, n, con)
    assert out.status == OPTIMAL_CONFIRMED and out.regions == want


def test_three_armed_vs():
    out = verify(K.KV, 3, 4, construct(K.KV, 4, 3))
    assert (out.regions, out.crossings) == (63, 54)


@pytest.mark.parametrize("n,want", [(0, 1), (1, 4), (2, 14), (3, 31), (4, 55)])
def test_h_bar_values(n, want):
    got = regions(construct(K.HBAR, n)) if n else count_regions_faces(build([])).R
    assert got == want


@pytest.mark.parametrize("n,R,vc", [(1, 3, 0), (2, 13, 8), (3, 30, 23), (4, 53, 44), (5, 83, 72)])
def test_stored_a_bar_table(n, R, vc):
    con = best_known(K.ABAR, n)
    arr = build(con.instances)
    assert not arr.report
    assert (count_regions_faces(arr).R, len(arr.records)) == (R, vc)


@pytest.mark.parametrize("kind,n,want", [
    (K.TBAR, 1, 3), (K.TBAR, 2, 9), (K.TBAR, 3, 19), (K.TBAR, 4, 32), (K.LOLLIPOP, 2, 10), (K.LOLLIPOP, 3, 25),
    (K.FIGURE8, 2, 12), (K.CONCAVE_QUAD, 2, 18),
])
def test_stored_figures(kind, n, want):
    con = best_known(kind, n)
    assert regions(con) == want
    assert con.metadata.get("nudges", 0) == 0


def test_four_t_bars_are_below_the_bound():
    out = verify(K.TBAR, None, 4, best_known(K.TBAR, 4))
    assert out.status == CONSISTENT and out.regions == 32 and out.crossings == 23


def test_unstored_sizes_raise():
    with pytest.raises(NotStored):
        best_known(K.TBAR, 9)


def test_circle_metadata_keeps_both_counts():
    con = construct(K.CIRCLE, 5)
    assert con.metadata["relabelled_crossings"] == 5 * 3
    assert con.metadata["boundary_base_nodes"] == 5
    assert len(build(con.instances).records) == 5 * 4


@given(st.integers(2, 12))
@settings(max_examples=11)
def test_pancake_hosts_are_close_to_equal_angles(n):
    for t, (p, d) in enumerate(pancake_hosts(n)):
        assert d.x * d.x + d.y * d.y == 1
        want = t * math.pi / (2 * (n - 1))
        got = math.atan2(float(d.y), float(d.x))
        assert abs(math.remainder(got - want, math.pi)) <= 1e-6


@pytest.mark.parametrize("k", range(3, 8))
def test_single_chain_attains_the_self_crossing_maximum(k):
    assert regions(construct(K.KCHAIN, 1, k)) == table2(k, 1)


@pytest.mark.parametrize("n", range(1, 5))
def test_a_rewrites_keep_the_region_count(n):
    con = construct(K.LONG_A, n)
    want = regions(con)
    as_v = [a_to_kv(i) for i in con.instances]
    as_chain = [a_to_chain(i) for i in con.instances]
    assert {i.kind for i in as_v} == {K.KV} and {i.kind for i in as_chain} == {K.KCHAIN}
    assert count_regions_faces(build(as_v)).R == want
    assert count_regions_faces(build(as_chain)).R == want


def test_repair_reaches_target_from_stored_poses():
    con = best_known(K.ABAR, 2)
    poses = [dict(i.pose) for i in con.instances]
    insts, nudges = repair(K.ABAR, None, poses, 8)
    assert nudges == 0 and len(build(insts).records) == 8


def test_constructions_never_exceed_the_bound():
    for kind, k in [(K.KV, 5), (K.KCHAIN, 6), (K.POLYGON, 6), (K.HEXAGRAM, None)]:
        for n in (2, 4):
            assert len(build(construct(kind, n, k).instances).records) <= crossing_bound(kind, k, n)
