"""Multiple maxima of Gaussian samples.

PLAIN refers to xi_1..xi_n and the events {xi_(n) - xi_(n-k+1) <= eps};
ABSOLUTE to |xi_1|..|xi_n| with the analogous events.  All quantities are the
eps -> 0 limits, which reduce to one-dimensional integrals.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from gausspoly.quadrature import DEFAULT_REL_TOL, GaussianPowerIntegrand, IntegrandKind, integrate
from gausspoly.regular import Family, RegularFamily, intrinsic_volume


class SampleFamily(enum.Enum):
    PLAIN = "plain"
    ABSOLUTE = "absolute"


class Moment(enum.Enum):
    ONE = "one"
    IDENTITY = "identity"
    INDICATOR_LEQ = "indicator_leq"


@dataclass(frozen=True)
class MomentFunction:
    """f(s) = 1, f(s) = s, or f(s) = 1{s <= threshold}."""

    kind: Moment
    threshold: float | None = None

    def __post_init__(self):
        if self.kind is Moment.INDICATOR_LEQ:
            if self.threshold is None or not math.isfinite(self.threshold):
                raise ValueError("INDICATOR_LEQ needs a finite threshold")
        elif self.threshold is not None:
            raise ValueError(f"{self.kind.name} takes no threshold")

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        if self.kind is Moment.ONE:
            return np.ones_like(s)
        if self.kind is Moment.IDENTITY:
            return s
        return (s <= self.threshold).astype(float)


@dataclass(frozen=True)
class MultiplicityEvent:
    """{top value minus k-th largest <= eps} for n samples of the given family."""

    n: int
    k: int
    eps: float
    family: SampleFamily = SampleFamily.PLAIN

    def __post_init__(self):
        _check_nk(self.n, self.k)
        if not (self.eps > 0 and math.isfinite(self.eps)):
            raise ValueError("eps must be positive and finite")


ONE = MomentFunction(Moment.ONE)
IDENTITY = MomentFunction(Moment.IDENTITY)


def indicator_leq(t0: float) -> MomentFunction:
    return MomentFunction(Moment.INDICATOR_LEQ, float(t0))


def _check_nk(n: int, k: int, strict: bool = False) -> tuple[int, int]:
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    top = n - 1 if strict else n
    if int(k) != k or not 1 <= k <= top:
        raise ValueError(f"k={k} outside 1..{top}")
    return int(n), int(k)


def _integrand(n: int, k: int, family: SampleFamily, p: int = 0, upper: float | None = None):
    """Phi^(n-k) phi^k (PLAIN) or (2Phi-1)^(n-k) phi^k on [0, inf) (ABSOLUTE)."""
    kind = IntegrandKind.FULL_LINE_PHI if family is SampleFamily.PLAIN else IntegrandKind.HALF_LINE_SYMMETRIC
    return GaussianPowerIntegrand(n - k, k, monomial_degree=p, kind=kind, upper=upper)


def _weight(k: int, family: SampleFamily) -> float:
    # (2 phi)^k for the absolute values
    return 2.0**k if family is SampleFamily.ABSOLUTE else 1.0


def multiplicity_normaliser(n: int, k: int, family: SampleFamily, rel_tol: float = DEFAULT_REL_TOL) -> float:
    n, k = _check_nk(n, k)
    return _weight(k, family) * integrate(_integrand(n, k, family), rel_tol=rel_tol).value


class ConditionalMaxDensity:
    """Vectorised conditional density with the normaliser computed once."""

    def __init__(self, n: int, k: int, family: SampleFamily = SampleFamily.PLAIN, rel_tol: float = DEFAULT_REL_TOL):
        self.n, self.k = _check_nk(n, k)
        self.family = family
        self._integrand = _integrand(self.n, self.k, family)
        self.norm = integrate(self._integrand, rel_tol=rel_tol).value

    def support(self) -> tuple[float, float]:
        return (0.0, math.inf) if self.family is SampleFamily.ABSOLUTE else (-math.inf, math.inf)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.family is SampleFamily.ABSOLUTE and np.any(t < 0):
            raise ValueError("the ABSOLUTE density is supported on t >= 0")
        return self._integrand(t) / self.norm


def conditional_max_density(t: float, n: int, k: int, family: SampleFamily = SampleFamily.PLAIN,
                            rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Density of the maximum given that it is attained k times."""
    return float(ConditionalMaxDensity(n, k, family, rel_tol)(np.array([float(t)]))[0])


def conditional_max_cdf(t: float, n: int, k: int, family: SampleFamily = SampleFamily.PLAIN,
                        rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Integral of :func:`conditional_max_density` up to t."""
    n, k = _check_nk(n, k)
    lo, _ = _integrand(n, k, family).domain()
    if t <= lo:
        return 0.0
    part = integrate(_integrand(n, k, family, upper=t), rel_tol=rel_tol).value
    return part / integrate(_integrand(n, k, family), rel_tol=rel_tol).value


def multiplicity_event_moment(f: MomentFunction, n: int, k: int, family: SampleFamily = SampleFamily.PLAIN,
                              rel_tol: float = DEFAULT_REL_TOL) -> float:
    """lim eps^(1-k) E[f(max) 1{max attained k times up to eps}] = k C(n,k) int f Phi^(n-k) phi^k."""
    if not isinstance(f, MomentFunction):
        raise TypeError("f must be a MomentFunction (ONE, IDENTITY or indicator_leq)")
    n, k = _check_nk(n, k)
    pref = k * math.comb(n, k) * _weight(k, family)
    if f.kind is Moment.INDICATOR_LEQ:
        lo, _ = _integrand(n, k, family).domain()
        if f.threshold <= lo:
            return 0.0
        integrand = _integrand(n, k, family, upper=f.threshold)
    else:
        integrand = _integrand(n, k, family, p=1 if f.kind is Moment.IDENTITY else 0)
    return pref * integrate(integrand, rel_tol=rel_tol).value


def intrinsic_volume_via_multiple_maxima(n: int, k: int, family: SampleFamily = SampleFamily.PLAIN,
                                         rel_tol: float = DEFAULT_REL_TOL) -> float:
    """V_k of the regular simplex (PLAIN) or crosspolytope (ABSOLUTE) from the k-fold maximum."""
    n, k = _check_nk(n, k, strict=True)
    moment = multiplicity_event_moment(IDENTITY, n, k, family, rel_tol)
    return (2.0 * math.pi) ** (0.5 * k) / math.factorial(k) * moment


def matching_intrinsic_volume(n: int, k: int, family: SampleFamily) -> float:
    tag = Family.SIMPLEX if family is SampleFamily.PLAIN else Family.CROSSPOLYTOPE
    return intrinsic_volume(RegularFamily(tag, n), k)


def partial_integration_check(n: int, k: int, rel_tol: float = DEFAULT_REL_TOL) -> tuple[float, float]:
    """Both sides of int Phi^(n-k-1) phi^(k+1) = k/(n-k) int s Phi^(n-k) phi^k."""
    n, k = _check_nk(n, k, strict=True)
    lhs = integrate(GaussianPowerIntegrand(n - k - 1, k + 1), rel_tol=rel_tol).value
    rhs = k / (n - k) * integrate(GaussianPowerIntegrand(n - k, k, monomial_degree=1), rel_tol=rel_tol).value
    return lhs, rhs


def conditional_max_limit_density(z: float, k: int) -> float:
    """exp(-e^-z) e^(-kz) / Gamma(k): limit law of u_n (max - u_n) given multiplicity k."""
    if int(k) != k or k < 1:
        raise ValueError("k must be a positive integer")
    z = float(z)
    if -z > 700.0:
        return 0.0
    return math.exp(-math.exp(-z) - k * z - math.lgamma(k))
