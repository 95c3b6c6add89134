import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frozen import FROZEN
from gausspoly.regular import Family, RegularFamily, external_angle, face_data, intrinsic_volume

S, C, R = Family.SIMPLEX, Family.CROSSPOLYTOPE, Family.RECT_SIMPLEX


def test_angle_examples():
    assert external_angle(RegularFamily(S, 2), 0) == pytest.approx(0.5, abs=1e-12)
    assert external_angle(RegularFamily(C, 3), 0) == pytest.approx(1 / 6, abs=1e-12)
    assert external_angle(RegularFamily(S, 4), 3) == pytest.approx(1.0, abs=1e-12)


def test_angle_rejections():
    with pytest.raises(ValueError):
        external_angle(RegularFamily(S, 4), 4)
    with pytest.raises(ValueError):
        external_angle(RegularFamily(Family.CUBE, 3), 0)
    with pytest.raises(ValueError):
        external_angle(RegularFamily.parallelotope((1.0, 2.0)), 0)


def test_unclamped_angle_is_close_to_clamped():
    fam = RegularFamily(S, 6)
    assert external_angle(fam, 5, clamp=False) == pytest.approx(external_angle(fam, 5), abs=1e-12)


def test_intrinsic_examples():
    assert intrinsic_volume(RegularFamily(S, 2), 1) == pytest.approx(math.sqrt(2), rel=1e-12)
    assert intrinsic_volume(RegularFamily(Family.CUBE, 4), 2) == 6
    assert intrinsic_volume(RegularFamily(C, 3), 3) == pytest.approx(4 / 3, rel=1e-14)


def test_face_data_examples():
    assert face_data(RegularFamily(S, 4), 1) == (6, pytest.approx(math.sqrt(2)))
    assert face_data(RegularFamily(C, 3), 1) == (12, pytest.approx(math.sqrt(2)))
    assert face_data(RegularFamily(S, 3), 2) == (1, pytest.approx(math.sqrt(3) / 2))
    with pytest.raises(ValueError):
        face_data(RegularFamily(S, 3), 3)


@pytest.mark.parametrize(
    "key, tag, n",
    [("regular_simplex_4", S, 4), ("regular_octahedron", C, 3), ("regular_rect_3", R, 3)],
)
def test_against_brute_force_geometry(key, tag, n):
    # V_1 from edge lengths and dihedral angles, V_2 half the surface area, V_3 the volume
    ref = FROZEN[key]
    for k in (1, 2, 3):
        assert intrinsic_volume(RegularFamily(tag, n), k) == pytest.approx(ref[k - 1], rel=1e-11)


@pytest.mark.parametrize("n", [2, 3, 7])
def test_mean_width_simplex(n):
    # V_1 of the regular simplex is sqrt(2 pi) times the expected maximum of n normals
    got = intrinsic_volume(RegularFamily(S, n), 1)
    assert got == pytest.approx(math.sqrt(2 * math.pi) * FROZEN["expected_max"][n], rel=1e-11)


@pytest.mark.parametrize("n", [1, 3, 6])
def test_mean_width_crosspolytope(n):
    got = intrinsic_volume(RegularFamily(C, n), 1)
    assert got == pytest.approx(math.sqrt(2 * math.pi) * FROZEN["expected_max_abs"][n], rel=1e-11)


@pytest.mark.parametrize("n", range(2, 11))
def test_vertex_angle_closure(n):
    assert n * external_angle(RegularFamily(S, n), 0, clamp=False) == pytest.approx(1.0, abs=1e-10)
    assert 2 * n * external_angle(RegularFamily(C, n), 0, clamp=False) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("n", range(1, 13))
def test_v0_is_one(n):
    tags = [C, R, Family.CUBE] + ([S] if n >= 2 else [])
    for tag in tags:
        assert intrinsic_volume(RegularFamily(tag, n), 0) == pytest.approx(1.0, abs=1e-10)
    assert intrinsic_volume(RegularFamily.parallelotope((0.5,) * n), 0) == 1.0


@pytest.mark.parametrize("n", range(2, 9))
def test_face_product_reconstruction(n):
    fam = RegularFamily(S, n)
    for k in range(0, n - 1):
        count, vol = face_data(fam, k)
        assert count * vol * external_angle(fam, k) == pytest.approx(intrinsic_volume(fam, k), rel=1e-12)


@pytest.mark.parametrize("n", range(1, 7))
def test_unit_parallelotope_is_cube(n):
    for k in range(n + 1):
        assert intrinsic_volume(RegularFamily.parallelotope((1.0,) * n), k) == intrinsic_volume(
            RegularFamily(Family.CUBE, n), k
        )


def test_parallelotope_elementary_symmetric():
    assert intrinsic_volume(RegularFamily.parallelotope((1.0, 2.0, 3.0)), 2) == pytest.approx(11.0)


def test_large_n_log_prefactor():
    # the log-space prefactor path beyond the exact-integer range stays finite and positive
    v = intrinsic_volume(RegularFamily(S, 10**5), 2)
    assert math.isfinite(v) and v > 0
    # monotone in n: faces of a smaller simplex are faces of a larger one
    assert v > intrinsic_volume(RegularFamily(S, 10**4), 2)


@pytest.mark.parametrize("bad", [(S, 0), (Family.PARALLELOTOPE, 2)])
def test_invalid_family(bad):
    with pytest.raises(ValueError):
        RegularFamily(*bad)


def test_k_out_of_range():
    with pytest.raises(ValueError):
        intrinsic_volume(RegularFamily(S, 3), 3)
    with pytest.raises(ValueError):
        intrinsic_volume(RegularFamily(C, 3), -1)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 12), st.data())
def test_simplex_intrinsic_positive_and_bounded(n, data):
    k = data.draw(st.integers(0, n - 1))
    fam = RegularFamily(S, n)
    v = intrinsic_volume(fam, k)
    assert v > 0
    # the simplex sits inside the crosspolytope, and V_k is monotone under inclusion
    assert v <= intrinsic_volume(RegularFamily(C, n), k) * (1 + 1e-12)
