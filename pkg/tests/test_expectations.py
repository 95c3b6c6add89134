import math

import pytest

from gausspoly.expectations import (
    Model, RandomPolytopeModel, expected_intrinsic_volume, expected_volume, miles_equivalence,
    poisson_mixture_volume,
)
from gausspoly.regular import Family, RegularFamily, intrinsic_volume
from gausspoly.special import unit_ball_volume


def tsirelson(d):
    return math.factorial(d) * unit_ball_volume(d) / (2 * math.pi) ** (d / 2)


def test_examples():
    assert expected_volume(RandomPolytopeModel(Model.GAUSSIAN, 2, 1)) == pytest.approx(2 / math.sqrt(math.pi), rel=1e-12)
    assert expected_volume(RandomPolytopeModel(Model.GAUSSIAN, 3, 2)) == pytest.approx(math.sqrt(3) / 2, rel=1e-12)
    assert expected_volume(RandomPolytopeModel(Model.SYMMETRIC, 2, 2)) == pytest.approx(2.0, rel=1e-14)
    assert expected_volume(RandomPolytopeModel(Model.ZONOTOPE, 1, 1)) == pytest.approx(math.sqrt(2 / math.pi), rel=1e-14)


@pytest.mark.parametrize(
    "tag, n, d",
    [(Model.GAUSSIAN, 2, 2), (Model.GAUSSIAN, 1, 1), (Model.SYMMETRIC, 1, 2), (Model.WITH_ZERO, 2, 3),
     (Model.ZONOTOPE, 2, 3), (Model.POISSON_GAUSSIAN, 0.0, 2), (Model.GAUSSIAN, 2.5, 1), (Model.GAUSSIAN, 3, 0)],
)
def test_invalid_models(tag, n, d):
    with pytest.raises(ValueError):
        RandomPolytopeModel(tag, n, d)


def test_invalid_model_message_names_range():
    with pytest.raises(ValueError, match="d < n"):
        RandomPolytopeModel(Model.GAUSSIAN, 3, 3)


def test_rate_only_for_poisson():
    assert RandomPolytopeModel(Model.POISSON_GAUSSIAN, 2.5, 2).rate == 2.5
    with pytest.raises(AttributeError):
        RandomPolytopeModel(Model.GAUSSIAN, 3, 2).rate


def test_intrinsic_m_equals_d():
    for tag in (Model.GAUSSIAN, Model.SYMMETRIC, Model.ZONOTOPE):
        model = RandomPolytopeModel(tag, 5, 3)
        assert expected_intrinsic_volume(model, 3) == pytest.approx(expected_volume(model), rel=1e-12)


def test_zonotope_intrinsic_display():
    k3 = unit_ball_volume(3)
    ref = 3 * k3 / (unit_ball_volume(1) * unit_ball_volume(2)) * 24 / (math.sqrt(2) * 6 * math.gamma(1.5))
    assert expected_intrinsic_volume(RandomPolytopeModel(Model.ZONOTOPE, 4, 3), 1) == pytest.approx(ref, rel=1e-13)


def test_intrinsic_rejections():
    with pytest.raises(ValueError):
        expected_intrinsic_volume(RandomPolytopeModel(Model.GAUSSIAN, 5, 3), 4)
    with pytest.raises(ValueError):
        expected_intrinsic_volume(RandomPolytopeModel(Model.WITH_ZERO, 5, 3), 1)


@pytest.mark.parametrize("tag", [Model.GAUSSIAN, Model.SYMMETRIC, Model.ZONOTOPE])
def test_intrinsic_kubota_relation(tag):
    # E V_m in R^d is the flag coefficient times E Vol_m of the m-dimensional model
    n, d = 6, 4
    for m in range(1, d):
        flag = math.comb(d, m) * unit_ball_volume(d) / (unit_ball_volume(m) * unit_ball_volume(d - m))
        ref = flag * expected_volume(RandomPolytopeModel(tag, n, m))
        assert expected_intrinsic_volume(RandomPolytopeModel(tag, n, d), m) == pytest.approx(ref, rel=1e-11)


def test_miles():
    a, b = miles_equivalence(1)
    assert a == pytest.approx(2 / math.sqrt(math.pi), rel=1e-14) and b == pytest.approx(a, rel=1e-14)
    a, b = miles_equivalence(2)
    assert a == pytest.approx(math.sqrt(3) / 2, rel=1e-14) and b == pytest.approx(a, rel=1e-14)
    a, b = miles_equivalence(7)
    assert abs(a - b) / a <= 1e-13


@pytest.mark.parametrize("n", range(2, 11))
def test_tsirelson_all_families(n):
    for d in range(1, n):
        for fam, tag in ((Family.SIMPLEX, Model.GAUSSIAN), (Family.CROSSPOLYTOPE, Model.SYMMETRIC),
                         (Family.RECT_SIMPLEX, Model.WITH_ZERO)):
            lhs = intrinsic_volume(RegularFamily(fam, n), d) * tsirelson(d)
            rhs = expected_volume(RandomPolytopeModel(tag, n, d))
            assert lhs == pytest.approx(rhs, rel=1e-11), (fam, n, d)


def test_poisson_mixture_truncated_at_120():
    model = RandomPolytopeModel(Model.POISSON_GAUSSIAN, 8.0, 2)
    assert poisson_mixture_volume(model, n_max=120) == pytest.approx(expected_volume(model), rel=1e-9)


@pytest.mark.parametrize("lam, d", [(3.3, 2), (20.0, 3), (0.7, 1)])
def test_poisson_symmetric_mixture(lam, d):
    model = RandomPolytopeModel(Model.POISSON_SYMMETRIC, lam, d)
    assert poisson_mixture_volume(model) == pytest.approx(expected_volume(model), rel=1e-9)


def test_poisson_mixture_needs_poisson():
    with pytest.raises(ValueError):
        poisson_mixture_volume(RandomPolytopeModel(Model.GAUSSIAN, 5, 2))


@pytest.mark.parametrize("d", [1, 2, 3])
def test_monotone_in_n(d):
    vals = [expected_volume(RandomPolytopeModel(Model.GAUSSIAN, n, d)) for n in (d + 1, d + 2, 10, 50, 1000)]
    assert all(x < y for x, y in zip(vals, vals[1:]))


def test_large_n_finite():
    v = expected_volume(RandomPolytopeModel(Model.GAUSSIAN, 10**6, 3))
    assert math.isfinite(v) and v > 0
