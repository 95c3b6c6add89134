"""Expected volumes and intrinsic volumes of Gaussian random polytopes.

Models: the Gaussian polytope conv[X_1..X_n], its symmetric version
conv[+-X_i], the polytope with the origin added, the Gaussian zonotope
sum [0, X_i], and the Poisson-sized variants of the first two.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from gausspoly.quadrature import DEFAULT_REL_TOL, GaussianPowerIntegrand, IntegrandKind, integrate
from gausspoly.special import log_unit_ball_volume


class Model(enum.Enum):
    GAUSSIAN = "gaussian"
    SYMMETRIC = "symmetric"
    WITH_ZERO = "with_zero"
    ZONOTOPE = "zonotope"
    POISSON_GAUSSIAN = "poisson_gaussian"
    POISSON_SYMMETRIC = "poisson_symmetric"

    @property
    def poisson(self) -> bool:
        return self in (Model.POISSON_GAUSSIAN, Model.POISSON_SYMMETRIC)


@dataclass(frozen=True)
class RandomPolytopeModel:
    """A random polytope family; ``n`` is the rate lambda for POISSON kinds."""

    tag: Model
    n: float
    d: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"dimension d must be a positive integer, got {self.d}")
        object.__setattr__(self, "d", int(self.d))
        if self.tag.poisson:
            if not (self.n > 0 and math.isfinite(self.n)):
                raise ValueError(f"Poisson rate must be positive and finite, got {self.n}")
            object.__setattr__(self, "n", float(self.n))
            return
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"number of points n must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        if self.tag is Model.GAUSSIAN and not self.n > self.d:
            raise ValueError(f"GAUSSIAN needs 1 <= d < n, got n={self.n}, d={self.d}")
        if self.tag is not Model.GAUSSIAN and not self.n >= self.d:
            raise ValueError(f"{self.tag.name} needs 1 <= d <= n, got n={self.n}, d={self.d}")

    @property
    def rate(self) -> float:
        if not self.tag.poisson:
            raise AttributeError("only Poisson models have a rate")
        return self.n


def _log_falling(n: int, k: int) -> float:
    """log(n! / (n-k)!) as a sum of logs (no factorial quotients)."""
    return math.fsum(math.log(n - j) for j in range(k))


def _log_tsirelson_norm(d: int) -> float:
    """log(kappa_d / d!), the factor turning a face-sum integral into a volume."""
    return log_unit_ball_volume(d) - math.lgamma(d + 1)


def gaussian_integral(n: int, m: int, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """int_R Phi^(n-m-1) phi^(m+1)"""
    return integrate(GaussianPowerIntegrand(n - m - 1, m + 1), rel_tol=rel_tol).value


def symmetric_integral(n: int, m: int, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """int_0^inf (2Phi-1)^(n-m-1) (2phi)^(m+1)"""
    kind = IntegrandKind.HALF_LINE_SYMMETRIC
    return 2.0 ** (m + 1) * integrate(GaussianPowerIntegrand(n - m - 1, m + 1, kind=kind), rel_tol=rel_tol).value


def symmetric_top_volume(d: int) -> float:
    """E Vol_d of conv[+-X_1..+-X_d] = 2^(d/2) / Gamma(d/2 + 1)."""
    return math.exp(0.5 * d * math.log(2.0) - math.lgamma(0.5 * d + 1.0))


def expected_volume(model: RandomPolytopeModel, rel_tol: float = DEFAULT_REL_TOL) -> float:
    n, d, tag = model.n, model.d, model.tag
    norm = _log_tsirelson_norm(d)
    if tag is Model.GAUSSIAN:
        return math.exp(norm + _log_falling(n, d + 1)) * gaussian_integral(n, d, rel_tol)
    if tag is Model.SYMMETRIC:
        if n == d:
            return symmetric_top_volume(d)
        return math.exp(norm + _log_falling(n, d + 1)) * symmetric_integral(n, d, rel_tol)
    if tag is Model.WITH_ZERO:
        log_corner = (
            math.lgamma(n + 1) - math.lgamma(d + 1) - math.lgamma(n - d + 1)
            - (n - 0.5 * d) * math.log(2.0) - math.lgamma(0.5 * d + 1.0)
        )
        corner = math.exp(log_corner)
        if n == d:
            return corner
        half = integrate(
            GaussianPowerIntegrand(n - d - 1, d + 1, kind=IntegrandKind.HALF_LINE_PHI), rel_tol=rel_tol
        ).value
        return corner + math.exp(norm + _log_falling(n, d + 1)) * half
    if tag is Model.ZONOTOPE:
        return math.exp(_log_falling(n, d) - 0.5 * d * math.log(2.0) - math.lgamma(0.5 * d + 1.0))
    lam = model.n
    if tag is Model.POISSON_GAUSSIAN:
        val = integrate(
            GaussianPowerIntegrand(0.0, d + 1, kind=IntegrandKind.POISSON, rate=lam), rel_tol=rel_tol
        ).value
        return math.exp(norm + (d + 1) * math.log(lam)) * val
    # POISSON_SYMMETRIC: N >= d+1 points via the integral, plus the N == d atom
    val = integrate(
        GaussianPowerIntegrand(0.0, d + 1, kind=IntegrandKind.POISSON, rate=2.0 * lam, lower=0.0),
        rel_tol=rel_tol,
    ).value
    atom = math.exp(-lam + d * math.log(lam) - math.lgamma(d + 1)) * symmetric_top_volume(d)
    return math.exp(norm + (d + 1) * math.log(2.0 * lam)) * val + atom


def expected_intrinsic_volume(model: RandomPolytopeModel, m: int, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """E V_m of the random polytope, from Kubota's projection formula."""
    n, d, tag = model.n, model.d, model.tag
    if int(m) != m or not 1 <= m <= d:
        raise ValueError(f"m={m} outside 1..{d}")
    if tag not in (Model.GAUSSIAN, Model.SYMMETRIC, Model.ZONOTOPE):
        raise ValueError(f"expected intrinsic volumes are not available for {tag.name}")
    # C(d, m) kappa_d / (kappa_m kappa_{d-m})
    log_flag = (
        math.lgamma(d + 1) - math.lgamma(m + 1) - math.lgamma(d - m + 1)
        + log_unit_ball_volume(d) - log_unit_ball_volume(m) - log_unit_ball_volume(d - m)
    )
    if tag is Model.ZONOTOPE:
        log_vol = _log_falling(n, m) - 0.5 * m * math.log(2.0) - math.lgamma(0.5 * m + 1.0)
        return math.exp(log_flag + log_vol)
    if tag is Model.SYMMETRIC and n == m:
        return math.exp(log_flag) * symmetric_top_volume(m)
    # (m+1) C(n, m+1) C(d, m) kappa_d / kappa_{d-m} * integral
    log_pref = (
        math.log(m + 1) + _log_falling(n, m + 1) - math.lgamma(m + 2)
        + math.lgamma(d + 1) - math.lgamma(m + 1) - math.lgamma(d - m + 1)
        + log_unit_ball_volume(d) - log_unit_ball_volume(d - m)
    )
    integral = gaussian_integral(n, m, rel_tol) if tag is Model.GAUSSIAN else symmetric_integral(n, m, rel_tol)
    return math.exp(log_pref) * integral


def miles_equivalence(d: int) -> tuple[float, float]:
    """Two closed forms for E Vol_d of the Gaussian simplex (n = d+1).

    They agree by Legendre's duplication formula.
    """
    if int(d) != d or d < 1:
        raise ValueError("d must be a positive integer")
    value_a = math.exp(0.5 * math.log(d + 1) - math.lgamma(0.5 * d + 1.0) - 0.5 * d * math.log(2.0))
    value_b = math.exp(
        0.5 * math.log(d + 1) + 0.5 * d * math.log(2.0) + math.lgamma(0.5 * d + 0.5)
        - math.lgamma(0.5) - math.lgamma(d + 1)
    )
    return value_a, value_b


def poisson_mixture_volume(model: RandomPolytopeModel, n_max: int | None = None, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Sum of Poisson(lambda) weights times fixed-n expected volumes.

    Truncated at ``lambda + 12 sqrt(lambda) + 30`` unless ``n_max`` is given.
    Independent of the closed integral used by :func:`expected_volume`.
    """
    if not model.tag.poisson:
        raise ValueError("poisson_mixture_volume needs a POISSON model")
    lam, d = model.rate, model.d
    if n_max is None:
        n_max = int(math.ceil(lam + 12.0 * math.sqrt(lam) + 30.0))
    fixed = Model.GAUSSIAN if model.tag is Model.POISSON_GAUSSIAN else Model.SYMMETRIC
    first = d + 1 if fixed is Model.GAUSSIAN else d
    terms = []
    for n in range(first, n_max + 1):
        weight = math.exp(-lam + n * math.log(lam) - math.lgamma(n + 1))
        terms.append(weight * expected_volume(RandomPolytopeModel(fixed, n, d), rel_tol))
    return math.fsum(terms)
