import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frozen import FROZEN
from gausspoly.special import (
    EULER_GAMMA, gamma_family, log_central_mass_array, log_std_normal_cdf, normal_eval, normal_tail_expansion,
    std_normal_cdf, std_normal_log_pdf, std_normal_pdf, unit_ball_volume,
)


def test_pdf_values():
    assert std_normal_pdf(0.0) == pytest.approx(0.3989422804014327, rel=1e-15)
    assert std_normal_pdf(1.0) == pytest.approx(FROZEN["pdf_1"], rel=1e-15)
    assert std_normal_pdf(1.0) == pytest.approx(0.24197072451914337, rel=1e-15)
    assert std_normal_pdf(-3.0) == std_normal_pdf(3.0)


@pytest.mark.parametrize("t", sorted(FROZEN["cdf"]))
def test_cdf_against_mpmath(t):
    assert std_normal_cdf(t) == pytest.approx(FROZEN["cdf"][t], rel=1e-13)


@pytest.mark.parametrize("t", sorted(FROZEN["log_cdf"]))
def test_log_cdf_against_mpmath(t):
    ref = FROZEN["log_cdf"][t]
    assert log_std_normal_cdf(t) == pytest.approx(ref, rel=1e-12, abs=1e-300)


def test_cdf_limits():
    assert std_normal_cdf(0.0) == 0.5
    assert abs(std_normal_cdf(40.0) - 1.0) <= 1e-15
    assert math.isfinite(log_std_normal_cdf(-200.0))


def test_log_cdf_minus_ten_tail_oracle():
    assert log_std_normal_cdf(-10.0) == pytest.approx(math.log(FROZEN["tail_10"]), rel=1e-12)


@pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
def test_non_finite_rejected(bad):
    for fn in (std_normal_pdf, std_normal_cdf, log_std_normal_cdf):
        with pytest.raises(ValueError):
            fn(bad)


def test_tail_expansion():
    assert normal_tail_expansion(10.0, 1) == pytest.approx(FROZEN["tail_10"], rel=3e-4)
    assert normal_tail_expansion(5.0, 0) > FROZEN["tail_5"]
    assert normal_tail_expansion(30.0, 1) / FROZEN["tail_30"] == pytest.approx(1.0, abs=1e-3)
    with pytest.raises(ValueError):
        normal_tail_expansion(0.0, 1)
    with pytest.raises(ValueError):
        normal_tail_expansion(1.0, 2)


def test_unit_ball_volume():
    assert unit_ball_volume(0) == pytest.approx(1.0)
    assert unit_ball_volume(1) == pytest.approx(2.0)
    assert unit_ball_volume(2) == pytest.approx(math.pi)
    assert unit_ball_volume(3) == pytest.approx(4 * math.pi / 3)


def test_gamma_family():
    g, lg, psi = gamma_family(1.0)
    assert g == pytest.approx(1.0) and lg == pytest.approx(0.0, abs=1e-15)
    assert psi == pytest.approx(-EULER_GAMMA, rel=1e-13)
    assert gamma_family(5.0)[0] == pytest.approx(24.0, rel=1e-13)
    assert gamma_family(0.5)[0] == pytest.approx(math.sqrt(math.pi), rel=1e-13)
    with pytest.raises(ValueError):
        gamma_family(0.0)


@pytest.mark.parametrize("alpha", [0.5, 1.5, 3.2, 7.9])
def test_gamma_recurrence(alpha):
    assert gamma_family(alpha + 1)[0] == pytest.approx(alpha * gamma_family(alpha)[0], rel=1e-12)


@pytest.mark.parametrize("d", range(1, 9))
def test_digamma_identity(d):
    g, _, psi = gamma_family(d + 1.0)
    rhs = math.factorial(d) * (EULER_GAMMA - sum(1.0 / j for j in range(2, d + 1)))
    assert g - g * psi == pytest.approx(rhs, rel=1e-11)


def test_cdf_symmetry_grid():
    for t in np.linspace(-8, 8, 321):
        assert abs(std_normal_cdf(t) + std_normal_cdf(-t) - 1.0) <= 1e-14


def test_cdf_derivative_is_pdf():
    h = 1e-5
    for t in np.linspace(-6, 6, 121):
        fd = (std_normal_cdf(t + h) - std_normal_cdf(t - h)) / (2 * h)
        assert fd == pytest.approx(std_normal_pdf(t), abs=1e-8)


@settings(max_examples=200, deadline=None)
@given(st.floats(-30, 30))
def test_normal_eval_consistency(t):
    ev = normal_eval(t)
    assert ev.pdf == pytest.approx(math.exp(ev.log_pdf), rel=1e-14)
    assert ev.pdf == std_normal_pdf(-t)
    if ev.cdf > 0:
        assert ev.cdf == pytest.approx(math.exp(ev.log_cdf), rel=1e-13)
    assert ev.log_cdf <= 0.0
    assert std_normal_log_pdf(t) == ev.log_pdf


@settings(max_examples=200, deadline=None)
@given(st.floats(-20, 20), st.floats(-20, 20))
def test_log_cdf_monotone(a, b):
    lo, hi = min(a, b), max(a, b)
    assert log_std_normal_cdf(lo) <= log_std_normal_cdf(hi)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-8, 30), st.floats(0.1, 10), st.floats(0.1, 10))
def test_central_mass(t, lp, lm):
    # log(Phi(t/lp) - Phi(-t/lm)) against the direct difference of tails
    got = float(log_central_mass_array(np.array([t / lp]), np.array([t / lm]))[0])
    direct = 1.0 - std_normal_cdf(-t / lp) - std_normal_cdf(-t / lm)
    if direct > 1e-3:
        assert got == pytest.approx(math.log(direct), rel=1e-12, abs=1e-14)
    assert got <= 0.0
