import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frozen import FROZEN
from gausspoly.expectations import Model, RandomPolytopeModel, expected_volume
from gausspoly.heteroscedastic import (
    CombinatorialBlowup, ScaleVector, SignedScaleVector, crosspolytope_intrinsic_volume, elementary_symmetric,
    heteroscedastic_expected_volume, rect_simplex_intrinsic_volume, simplex_facet_volume, simplex_intrinsic_volume,
    symmetric_crosspolytope_intrinsic_volume,
)
from gausspoly.regular import Family, RegularFamily, intrinsic_volume

scale = st.floats(0.2, 5.0)


def test_simplex_examples():
    assert simplex_intrinsic_volume(ScaleVector((3.0, 4.0)), 2) == pytest.approx(5.0, abs=1e-12)
    ref = intrinsic_volume(RegularFamily(Family.SIMPLEX, 3), 1)
    assert simplex_intrinsic_volume(ScaleVector((1.0, 1.0, 1.0)), 2) == pytest.approx(ref, abs=1e-10)


def test_facet_volume_examples():
    assert simplex_facet_volume((1.0, 1.0)) == pytest.approx(math.sqrt(2))
    assert simplex_facet_volume((3.0, 4.0)) == pytest.approx(5.0, abs=1e-12)
    assert simplex_facet_volume((1.0, 1.0, 1.0)) == pytest.approx(math.sqrt(3) / 2)


def test_triangle_against_geometry():
    # V_1 is half the perimeter, V_2 the area
    v1, v2 = FROZEN["triangle_0.3_2_5"]
    sv = ScaleVector((0.3, 2.0, 5.0))
    assert simplex_intrinsic_volume(sv, 2) == pytest.approx(v1, rel=1e-11)
    assert simplex_intrinsic_volume(sv, 3) == pytest.approx(v2, rel=1e-11)
    assert simplex_facet_volume(sv) == pytest.approx(v2, rel=1e-12)


def test_tetrahedron_against_geometry():
    ref = FROZEN["tetra_1_0.5_2_3"]
    sv = ScaleVector((1.0, 0.5, 2.0, 3.0))
    for m in (2, 3, 4):
        assert simplex_intrinsic_volume(sv, m) == pytest.approx(ref[m - 2], rel=1e-11)


def test_rect_simplex_against_geometry():
    ref = FROZEN["rect_0.7_1.5_2"]
    for m in (2, 3, 4):
        assert rect_simplex_intrinsic_volume(ScaleVector((0.7, 1.5, 2.0)), m) == pytest.approx(ref[m - 2], rel=1e-11)


def test_octahedron_against_geometry():
    ref = FROZEN["octa_plus_1_2_0.5_minus_1.5_0.8_1.2"]
    sv = SignedScaleVector((1.0, 2.0, 0.5), (1.5, 0.8, 1.2))
    for m in (2, 3, 4):
        assert crosspolytope_intrinsic_volume(sv, m) == pytest.approx(ref[m - 2], rel=1e-11)


def test_crosspolytope_segment():
    assert crosspolytope_intrinsic_volume(SignedScaleVector((2.0,), (3.0,)), 2) == pytest.approx(5.0, abs=1e-12)


def test_rect_examples():
    assert rect_simplex_intrinsic_volume(ScaleVector((2.5,)), 2) == pytest.approx(2.5, rel=1e-12)
    assert rect_simplex_intrinsic_volume(ScaleVector((0.4, 3.0, 1.1)), 1) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("n", range(1, 9))
def test_unit_scale_reductions(n):
    ones = (1.0,) * n
    for m in range(1, n + 1):
        assert simplex_intrinsic_volume(ScaleVector(ones), m) == pytest.approx(
            intrinsic_volume(RegularFamily(Family.SIMPLEX, n), m - 1), abs=1e-10)
    for m in range(1, n + 2):
        assert crosspolytope_intrinsic_volume(SignedScaleVector(ones, ones), m) == pytest.approx(
            intrinsic_volume(RegularFamily(Family.CROSSPOLYTOPE, n), m - 1), abs=1e-10)
        assert rect_simplex_intrinsic_volume(ScaleVector(ones), m) == pytest.approx(
            intrinsic_volume(RegularFamily(Family.RECT_SIMPLEX, n), m - 1), abs=1e-10)


def test_elementary_symmetric():
    assert elementary_symmetric((1, 2, 3), 2) == 11
    assert elementary_symmetric((4.5, 2.0), 0) == 1
    assert elementary_symmetric((1, 2, 3), 3) == 6
    with pytest.raises(ValueError):
        elementary_symmetric((1, 2), 3)


def test_expected_volume_reduction():
    assert heteroscedastic_expected_volume(ScaleVector((1.0, 1.0, 1.0)), 2) == pytest.approx(math.sqrt(3) / 2, abs=1e-10)
    signed = heteroscedastic_expected_volume(SignedScaleVector((1.0,) * 4, (1.0,) * 4), 2)
    assert signed == pytest.approx(expected_volume(RandomPolytopeModel(Model.SYMMETRIC, 4, 2)), rel=1e-10)


def test_expected_volume_homogeneity():
    base = heteroscedastic_expected_volume(ScaleVector((1.0, 2.0, 1.0, 2.0)), 2)
    scaled = heteroscedastic_expected_volume(ScaleVector((3.0, 6.0, 3.0, 6.0)), 2)
    assert scaled == pytest.approx(9.0 * base, rel=1e-10)


def test_expected_volume_ranges():
    with pytest.raises(ValueError):
        heteroscedastic_expected_volume(ScaleVector((1.0, 2.0)), 2)
    with pytest.raises(ValueError):
        heteroscedastic_expected_volume(SignedScaleVector((1.0,), (1.0,)), 2)


def test_caps():
    with pytest.raises(CombinatorialBlowup) as info:
        simplex_intrinsic_volume(ScaleVector((1.0,) * 23), 3)
    assert info.value.terms == math.comb(23, 3) and info.value.cap == 22
    with pytest.raises(CombinatorialBlowup):
        crosspolytope_intrinsic_volume(SignedScaleVector((1.0,) * 19, (1.0,) * 19), 2)


@pytest.mark.parametrize("bad", [(), (1.0, 0.0), (1.0, -2.0), (math.inf,)])
def test_invalid_scales(bad):
    with pytest.raises(ValueError):
        ScaleVector(bad)


def test_signed_length_mismatch():
    with pytest.raises(ValueError):
        SignedScaleVector((1.0, 2.0), (1.0,))


def test_limit_consistency():
    # shrinking the last scale to zero turns the scaled simplex into the one with 0 attached
    ls = (0.8, 1.7, 2.4)
    for m in (1, 2, 3, 4):
        limit = rect_simplex_intrinsic_volume(ScaleVector(ls), m)
        approx = simplex_intrinsic_volume(ScaleVector(ls + (1e-6,)), m)
        assert approx == pytest.approx(limit, rel=1e-5)


@settings(max_examples=15, deadline=None)
@given(st.lists(scale, min_size=2, max_size=5), st.floats(0.3, 3.0), st.data())
def test_simplex_homogeneity(ls, c, data):
    m = data.draw(st.integers(1, len(ls)))
    base = simplex_intrinsic_volume(ScaleVector(ls), m)
    assert simplex_intrinsic_volume(ScaleVector([c * v for v in ls]), m) == pytest.approx(c ** (m - 1) * base, rel=1e-9)


@settings(max_examples=15, deadline=None)
@given(st.lists(scale, min_size=2, max_size=5), st.randoms(use_true_random=False), st.data())
def test_simplex_permutation_invariance(ls, rnd, data):
    m = data.draw(st.integers(1, len(ls)))
    perm = list(ls)
    rnd.shuffle(perm)
    assert simplex_intrinsic_volume(ScaleVector(perm), m) == pytest.approx(
        simplex_intrinsic_volume(ScaleVector(ls), m), rel=1e-12)


@settings(max_examples=10, deadline=None)
@given(st.lists(st.tuples(scale, scale), min_size=1, max_size=4), st.randoms(use_true_random=False), st.data())
def test_crosspolytope_permutation_and_v0(pairs, rnd, data):
    plus, minus = zip(*pairs)
    m = data.draw(st.integers(1, len(pairs)))
    perm = list(pairs)
    rnd.shuffle(perm)
    pp, pm = zip(*perm)
    a = crosspolytope_intrinsic_volume(SignedScaleVector(plus, minus), m)
    b = crosspolytope_intrinsic_volume(SignedScaleVector(pp, pm), m)
    assert a == pytest.approx(b, rel=1e-12)
    assert crosspolytope_intrinsic_volume(SignedScaleVector(plus, minus), 1) == pytest.approx(1.0, abs=1e-10)


@settings(max_examples=10, deadline=None)
@given(st.lists(scale, min_size=1, max_size=5), st.data())
def test_symmetric_collapsed_path(ls, data):
    m = data.draw(st.integers(1, len(ls)))
    a = symmetric_crosspolytope_intrinsic_volume(ls, m)
    b = crosspolytope_intrinsic_volume(SignedScaleVector(ls, ls), m)
    assert a == pytest.approx(b, rel=1e-12)


@settings(max_examples=10, deadline=None)
@given(st.lists(scale, min_size=1, max_size=6))
def test_simplex_v0(ls):
    assert simplex_intrinsic_volume(ScaleVector(ls), 1) == pytest.approx(1.0, abs=1e-10)
