"""Executable acceptance suites: identities, asymptotics, montecarlo.

Each check compares a computed value with an independent reference and
records whether the gap is inside the stated tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy.integrate import quad

from gausspoly import asymptotics as asy
from gausspoly.expectations import (
    Model, RandomPolytopeModel, expected_volume, miles_equivalence, poisson_mixture_volume, symmetric_top_volume,
)
from gausspoly.heteroscedastic import (
    ScaleVector, SignedScaleVector, crosspolytope_intrinsic_volume, heteroscedastic_expected_volume,
    rect_simplex_intrinsic_volume, simplex_facet_volume, simplex_intrinsic_volume,
)
from gausspoly.montecarlo import estimate_expected_volume, estimate_multiplicity_event
from gausspoly.orderstats import (
    IDENTITY, ONE, ConditionalMaxDensity, SampleFamily, intrinsic_volume_via_multiple_maxima,
    multiplicity_event_moment, partial_integration_check,
)
from gausspoly.regular import Family, RegularFamily, external_angle, intrinsic_volume
from gausspoly.special import log_unit_ball_volume

SUITES = ("identities", "asymptotics", "montecarlo")


@dataclass
class Check:
    name: str
    params: dict
    value: float
    reference: float
    gap: float
    tolerance: float
    passed: bool
    method: str = "quadrature"
    std_error: float | None = None
    seed: int | None = None
    extra: dict = field(default_factory=dict)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


def _close(name, params, value, reference, tol, relative=True, method="quadrature") -> Check:
    gap = _rel(value, reference) if relative else abs(value - reference)
    return Check(name, params, value, reference, gap, tol, gap <= tol, method)


def _tsirelson_factor(d: int) -> float:
    """d! kappa_d / (2 pi)^(d/2)"""
    return math.exp(math.lgamma(d + 1) + log_unit_ball_volume(d) - 0.5 * d * math.log(2.0 * math.pi))


# -- identities ------------------------------------------------------------------

def simplex_volume_checks():
    out = []
    for d in range(1, 9):
        exact = math.sqrt(d + 1) / (math.gamma(0.5 * d + 1.0) * 2.0 ** (0.5 * d))
        value = expected_volume(RandomPolytopeModel(Model.GAUSSIAN, d + 1, d))
        out.append(_close("simplex_volume", {"d": d}, value, exact, 1e-10))
        a, b = miles_equivalence(d)
        out.append(_close("miles_equivalence", {"d": d}, a, b, 1e-12, method="closed_form"))
    return out


def symmetric_top_checks():
    out = []
    for d in range(1, 9):
        exact = 2.0 ** (0.5 * d) / math.gamma(0.5 * d + 1.0)
        value = expected_volume(RandomPolytopeModel(Model.SYMMETRIC, d, d))
        out.append(_close("symmetric_top", {"d": d}, value, exact, 1e-10, relative=False, method="closed_form"))
        # second route: Tsirelson through the crosspolytope volume 2^d/d!
        via_face = heteroscedastic_expected_volume(SignedScaleVector((1.0,) * d, (1.0,) * d), d)
        out.append(_close("symmetric_top_via_crosspolytope", {"d": d}, via_face, exact, 1e-10, relative=False,
                          method="closed_form"))
    return out


def tsirelson_checks():
    pairs = (
        (Family.SIMPLEX, Model.GAUSSIAN),
        (Family.CROSSPOLYTOPE, Model.SYMMETRIC),
        (Family.RECT_SIMPLEX, Model.WITH_ZERO),
    )
    out = []
    for n in range(2, 9):
        for d in range(1, n):
            for fam, model in pairs:
                lhs = intrinsic_volume(RegularFamily(fam, n), d) * _tsirelson_factor(d)
                rhs = expected_volume(RandomPolytopeModel(model, n, d))
                out.append(_close("tsirelson", {"family": fam.value, "n": n, "d": d}, lhs, rhs, 1e-11))
    return out


def angle_checks():
    out = []
    for n in range(2, 13):
        v = n * external_angle(RegularFamily(Family.SIMPLEX, n), 0, clamp=False)
        out.append(_close("vertex_angle_sum", {"family": "simplex", "n": n}, v, 1.0, 1e-10, relative=False))
        c = 2 * n * external_angle(RegularFamily(Family.CROSSPOLYTOPE, n), 0, clamp=False)
        out.append(_close("vertex_angle_sum", {"family": "crosspolytope", "n": n}, c, 1.0, 1e-10, relative=False))
    for n in range(2, 9):
        t = external_angle(RegularFamily(Family.SIMPLEX, n), n - 1, clamp=False)
        out.append(_close("top_face_angle", {"family": "simplex", "n": n}, t, 1.0, 1e-10, relative=False))
    return out


def heteroscedastic_checks():
    out = []
    for n in range(1, 9):
        ones = (1.0,) * n
        for m in range(1, n + 1):
            v = simplex_intrinsic_volume(ScaleVector(ones), m)
            ref = intrinsic_volume(RegularFamily(Family.SIMPLEX, n), m - 1)
            out.append(_close("hetero_simplex", {"n": n, "m": m}, v, ref, 1e-10, relative=False))
        for m in range(1, n + 2):
            v = crosspolytope_intrinsic_volume(SignedScaleVector(ones, ones), m)
            ref = intrinsic_volume(RegularFamily(Family.CROSSPOLYTOPE, n), m - 1)
            out.append(_close("hetero_crosspolytope", {"n": n, "m": m}, v, ref, 1e-10, relative=False))
            v = rect_simplex_intrinsic_volume(ScaleVector(ones), m)
            ref = intrinsic_volume(RegularFamily(Family.RECT_SIMPLEX, n), m - 1)
            out.append(_close("hetero_rect_simplex", {"n": n, "m": m}, v, ref, 1e-10, relative=False))
    out.append(_close("hetero_scales_3_4_v1", {"scales": [3, 4]},
                      simplex_intrinsic_volume(ScaleVector((3.0, 4.0)), 2), 5.0, 1e-12, relative=False))
    out.append(_close("hetero_scales_3_4_facet", {"scales": [3, 4]},
                      simplex_facet_volume((3.0, 4.0)), 5.0, 1e-12, relative=False, method="closed_form"))
    return out


def orderstats_checks():
    out = []
    for n in range(2, 9):
        for k in range(1, n):
            for fam in SampleFamily:
                v = intrinsic_volume_via_multiple_maxima(n, k, fam)
                tag = Family.SIMPLEX if fam is SampleFamily.PLAIN else Family.CROSSPOLYTOPE
                ref = intrinsic_volume(RegularFamily(tag, n), k)
                out.append(_close("maxima_intrinsic", {"family": fam.value, "n": n, "k": k}, v, ref, 1e-9))
            lhs, rhs = partial_integration_check(n, k)
            out.append(_close("partial_integration", {"n": n, "k": k}, rhs, lhs, 1e-10))
    for n in range(1, 9):
        for k in range(1, n + 1):
            for fam in SampleFamily:
                dens = ConditionalMaxDensity(n, k, fam)
                lo, hi = dens.support()
                mass, _ = quad(lambda t: float(dens(t)), lo, hi, epsabs=1e-14, epsrel=1e-13, limit=200)
                out.append(_close("density_normalisation", {"family": fam.value, "n": n, "k": k},
                                  mass, 1.0, 1e-10, relative=False))
    return out


def poisson_mixture_checks():
    model = RandomPolytopeModel(Model.POISSON_GAUSSIAN, 8.0, 2)
    return [_close("poisson_mixture", {"lambda": 8.0, "d": 2}, expected_volume(model),
                   poisson_mixture_volume(model), 1e-9)]


def identities_suite():
    return (simplex_volume_checks() + symmetric_top_checks() + tsirelson_checks() + angle_checks()
            + heteroscedastic_checks() + orderstats_checks() + poisson_mixture_checks())


# -- asymptotics -------------------------------------------------------------------

def expansion_gap(d: int, n: float) -> float:
    exp = asy.expected_volume_expansion(asy.ExpansionModel.GAUSSIAN, n, d).value
    return _rel(exp, expected_volume(RandomPolytopeModel(Model.GAUSSIAN, int(n), d)))


def asymptotics_suite():
    out = []
    for d in (1, 2, 3):
        big, small = expansion_gap(d, 10**6), expansion_gap(d, 10**3)
        out.append(Check("volume_expansion_gap", {"d": d, "n": 10**6}, big, 0.0, big, 0.03, big < 0.03, "expansion"))
        out.append(Check("volume_expansion_decay", {"d": d, "n_small": 10**3, "n_large": 10**6}, big, small,
                         big, small, big < small, "expansion"))
    n = 10**4
    ratio = asy.integral_asymptotic(1.0, n, asy.IntegralKind.BINOMIAL).value * (n + 1)
    out.append(_close("integral_alpha1_ratio", {"alpha": 1, "n": n}, ratio, 1.0, 1e-3, relative=False,
                      method="expansion"))
    return out


# -- montecarlo --------------------------------------------------------------------

MC_CASES = (
    (Model.GAUSSIAN, 3, 2, None),
    (Model.GAUSSIAN, 6, 3, None),
    (Model.SYMMETRIC, 4, 2, None),
    (Model.WITH_ZERO, 5, 2, None),
    (Model.ZONOTOPE, 4, 2, None),
    (Model.POISSON_GAUSSIAN, 8.0, 2, None),
    (Model.GAUSSIAN, 4, 2, (1.0, 2.0, 1.0, 2.0)),
)


def mc_volume_checks(samples: int, seed: int, workers: int | None = None):
    out = []
    for tag, n, d, scales in MC_CASES:
        model = RandomPolytopeModel(tag, n, d)
        if scales is None:
            ref = expected_volume(model)
            est = estimate_expected_volume(model, samples=samples, seed=seed, workers=workers)
        else:
            ref = heteroscedastic_expected_volume(ScaleVector(scales), d)
            est = estimate_expected_volume(model, ScaleVector(scales), samples=samples, seed=seed, workers=workers)
        gap = abs(est.mean - ref)
        params = {"model": tag.value, "n": n, "d": d, "samples": samples}
        if scales is not None:
            params["scales"] = list(scales)
        out.append(Check("mc_expected_volume", params, est.mean, ref, gap, 3.0 * est.std_error,
                         gap <= 3.0 * est.std_error, "monte_carlo", est.std_error, seed))
    return out


def mc_event_checks(samples: int, seed: int, workers: int | None = None):
    limit = multiplicity_event_moment(IDENTITY, 10, 2)
    coarse = estimate_multiplicity_event(10, 2, 0.02, IDENTITY, samples=samples, seed=seed, workers=workers)
    fine = estimate_multiplicity_event(10, 2, 0.01, IDENTITY, samples=samples, seed=seed, workers=workers)
    sure = estimate_multiplicity_event(10, 1, 0.02, ONE, samples=min(samples, 10**5), seed=seed, workers=workers)
    gap_c, gap_f = abs(coarse.mean - limit), abs(fine.mean - limit)
    tol = 3.0 * coarse.std_error + 0.05 * abs(limit)
    base = {"n": 10, "k": 2, "f": "identity", "samples": samples}
    return [
        Check("mc_event_eps", {**base, "eps": 0.02}, coarse.mean, limit, gap_c, tol, gap_c <= tol,
              "monte_carlo", coarse.std_error, seed),
        Check("mc_event_eps_halved", {**base, "eps": 0.01, "gap_eps_0.02": gap_c}, fine.mean, limit, gap_f, gap_c,
              gap_f < gap_c, "monte_carlo", fine.std_error, seed),
        Check("mc_event_sure", {"n": 10, "k": 1, "f": "one", "eps": 0.02}, sure.mean, 1.0, abs(sure.mean - 1.0),
              0.0, sure.mean == 1.0, "monte_carlo", sure.std_error, seed),
    ]


def montecarlo_suite(samples: int = 10**6, seed: int = 42, event_samples: int = 10**7, workers: int | None = None):
    return mc_volume_checks(samples, seed, workers) + mc_event_checks(event_samples, seed, workers)


def run_suite(name: str, samples: int = 10**6, seed: int = 42, event_samples: int = 10**7,
              workers: int | None = None) -> list[Check]:
    if name == "identities":
        return identities_suite()
    if name == "asymptotics":
        return asymptotics_suite()
    if name == "montecarlo":
        return montecarlo_suite(samples, seed, event_samples, workers)
    raise ValueError(f"unknown suite {name!r}; expected one of {SUITES}")
