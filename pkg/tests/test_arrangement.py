import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from helpers import ALL_KINDS, float_crossings, random_configuration, random_similarity
from pancake_lab.arrangement import (
    COINCIDENT_BASE_NODES, COLLINEAR_OVERLAP, CONSISTENT, FOREIGN_BASE_NODE, MISMATCH, OPTIMAL_CONFIRMED,
    TANGENCY, TRIPLE_POINT, DegenerateInput, DisconnectedInput, build, count_regions_faces,
    count_regions_formula, euler_target, verify,
)
from pancake_lab.formulas import crossing_bound, region_upper_bound
from pancake_lab.shapes import ShapeKind as K, instantiate, transform


def line(x, y, dx, dy, i):
    return instantiate(K.LINE, {"x": x, "y": y, "dx": dx, "dy": dy}, id=i)


def circle(x, y, r, i):
    return instantiate(K.CIRCLE, {"x": x, "y": y, "r": r}, id=i)


def both(insts):
    arr = build(insts)
    return count_regions_formula(arr), count_regions_faces(arr)


def test_empty_plane_is_one_region():
    f, g = both([])
    assert f.R == g.R == 1


def test_one_and_two_lines():
    assert both([line(0, 0, 1, 0, 0)])[1].R == 2
    f, g = both([line(0, 0, 1, 0, 0), line(0, 0, 0, 1, 1)])
    assert f.R == g.R == 4 and f.V_C == 1


def test_parallel_lines_use_the_face_counter():
    arr = build([line(0, 0, 1, 0, 0), line(0, 1, 1, 0, 1)])
    with pytest.raises(DisconnectedInput):
        count_regions_formula(arr)
    assert count_regions_faces(arr).R == 3


def test_circles():
    assert both([circle(0, 0, 1, 0)])[1].R == 2
    f, g = both([circle(0, 0, 5, 0), circle(6, 0, 5, 1)])
    assert f.R == g.R == 4
    assert count_regions_faces(build([circle(0, 0, 5, 0), circle(0, 0, 1, 1)])).R == 3


def test_report_fields_are_consistent():
    f, g = both([line(0, 0, 1, 0, 0), line(0, 0, 0, 1, 1), line(0, 1, 1, 1, 2)])
    assert f.same_counts(g)
    assert g.V == g.V_B + g.V_C and g.E == g.E_i + g.E_f and g.R == g.R_i + g.R_f
    assert g.as_dict()["R"] == 7


def test_triple_point_is_reported():
    arr = build([line(0, 0, 1, 0, 0), line(0, 0, 0, 1, 1), line(0, 0, 1, 1, 2)])
    assert TRIPLE_POINT in arr.report.kinds()


def test_arm_through_foreign_base_node():
    hat = instantiate(K.HATPIN, {"x": 0, "y": 0, "dx": 1, "dy": 0}, id=0)
    arr = build([hat, line(0, -1, 0, 1, 1)])
    assert FOREIGN_BASE_NODE in arr.report.kinds()


def test_collinear_overlap_blocks_face_tracing():
    arr = build([line(0, 0, 1, 0, 0), line(3, 0, 2, 0, 1)])
    assert COLLINEAR_OVERLAP in arr.report.kinds()
    with pytest.raises(DegenerateInput):
        count_regions_faces(arr)


def test_tangency_between_instances():
    arr = build([circle(0, 0, 1, 0), circle(2, 0, 1, 1)])
    assert TANGENCY in arr.report.kinds()


def test_coincident_base_nodes():
    a = instantiate(K.HATPIN, {"x": 0, "y": 0, "dx": 1, "dy": 0}, id=0)
    b = instantiate(K.HATPIN, {"x": 0, "y": 0, "dx": 0, "dy": 1}, id=1)
    assert COINCIDENT_BASE_NODES in build([a, b]).report.kinds()


def test_verify_statuses():
    lines = [line(0, 0, 1, 0, 0), line(0, 0, 0, 1, 1)]
    assert verify(K.LINE, None, 2, lines).status == OPTIMAL_CONFIRMED
    parallel = [line(0, 0, 1, 0, 0), line(0, 1, 1, 0, 1), line(0, 0, 0, 1, 2)]
    out = verify(K.LINE, None, 3, parallel)
    assert out.status == CONSISTENT and out.regions == 6
    assert verify(K.LINE, None, 2, lines, expected_regions=5).status == MISMATCH


kind_ids = [f"{k.value}-{kk}" if kk else k.value for k, kk in ALL_KINDS]


@pytest.mark.parametrize("kind,k", ALL_KINDS, ids=kind_ids)
@settings(max_examples=500)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 3))
def test_dual_counters_agree_on_random_configurations(kind, k, seed, n):
    insts = random_configuration(kind, k, random.Random(seed), n)
    arr = build(insts)
    assume(not arr.report)
    faces = count_regions_faces(arr)
    try:
        formula = count_regions_formula(arr)
    except DisconnectedInput:
        assume(False)
    assert formula.same_counts(faces)
    assert faces.euler() == euler_target(arr)
    if arr.components == 1 and arr.infinite_ends:
        assert faces.R - faces.E + faces.V == 1
    assert len(arr.records) <= crossing_bound(kind, k, n)
    assert faces.R <= region_upper_bound(kind, k, n)


@pytest.mark.parametrize("kind,k", ALL_KINDS, ids=kind_ids)
@settings(max_examples=40)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 3))
def test_counts_survive_a_similarity_map(kind, k, seed, n):
    rng = random.Random(seed)
    insts = random_configuration(kind, k, rng, n)
    arr = build(insts)
    assume(not arr.report)
    before = count_regions_faces(arr)
    m = random_similarity(rng)
    t = (Fraction(rng.randint(-50, 50), 7), Fraction(rng.randint(-50, 50), 3))
    moved = [transform(i, m, t, id=i.id) for i in insts]
    after = count_regions_faces(build(moved))
    assert before.same_counts(after)


@pytest.mark.parametrize("kind,k", ALL_KINDS, ids=kind_ids)
@settings(max_examples=30)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 3))
def test_crossing_count_matches_float_oracle(kind, k, seed, n):
    insts = random_configuration(kind, k, random.Random(seed), n)
    arr = build(insts)
    assume(not arr.report)
    assert len(arr.records) == float_crossings(insts)


AFFINE_KINDS = [(kind, k) for kind, k in ALL_KINDS if kind in (K.LINE, K.HATPIN, K.KV, K.KCHAIN, K.LONG_A,
                                                              K.LONG_Z, K.LONG_W, K.POLYGON)]


@pytest.mark.parametrize("kind,k", AFFINE_KINDS, ids=lambda v: getattr(v, "value", str(v)))
@settings(max_examples=40)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 3))
def test_affine_kinds_survive_an_affine_map(kind, k, seed, n):
    from helpers import random_affine

    rng = random.Random(seed)
    insts = random_configuration(kind, k, rng, n)
    arr = build(insts)
    assume(not arr.report)
    before = count_regions_faces(arr)
    m = random_affine(rng)
    moved = [transform(i, m, (1, -2), id=i.id) for i in insts]
    assert before.same_counts(count_regions_faces(build(moved)))
