"""Extreme-value norming constants and two-term large-n expansions."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from gausspoly.special import EULER_GAMMA, gamma_family, log_unit_ball_volume

LOG_2_SQRT_PI = math.log(2.0 * math.sqrt(math.pi))


class ExpansionModel(enum.Enum):
    GAUSSIAN = "gaussian"
    SYMMETRIC = "symmetric"
    POISSON_GAUSSIAN = "poisson_gaussian"
    POISSON_SYMMETRIC = "poisson_symmetric"


class ExpansionFamily(enum.Enum):
    SIMPLEX = "simplex"
    CROSSPOLYTOPE = "crosspolytope"


class IntegralKind(enum.Enum):
    BINOMIAL = "binomial"      # int_R phi^alpha Phi^n
    SYMMETRIC = "symmetric"    # int_0^inf phi^alpha (2Phi-1)^n
    POISSON = "poisson"        # int_R phi^alpha exp(lam (Phi-1))


@dataclass(frozen=True)
class AsymptoticExpansion:
    u: float
    leading: float
    correction: float

    @property
    def value(self) -> float:
        return self.leading + self.correction


def evt_norming_constant(n: float) -> float:
    """u_n = sqrt(2 log n) - (log log n / 2 + log(2 sqrt(pi))) / sqrt(2 log n)."""
    n = float(n)
    if not n > math.e:
        raise ValueError(f"norming constant needs n > e, got {n}")
    root = math.sqrt(2.0 * math.log(n))
    return root - (0.5 * math.log(math.log(n)) + LOG_2_SQRT_PI) / root


def gamma_correction_constant(d: int) -> float:
    """gamma_Euler - sum_{j=2}^d 1/j, equal to (Gamma(d+1) - Gamma'(d+1)) / d!."""
    if int(d) != d or d < 1:
        raise ValueError("d must be a positive integer")
    return EULER_GAMMA - math.fsum(1.0 / j for j in range(2, int(d) + 1))


def festoon_height_constant(d: int) -> float:
    """Expected height of the Burgers festoon over a point of R^(d-1)."""
    if int(d) != d or d < 1:
        raise ValueError("d must be a positive integer")
    return -gamma_correction_constant(d) + (d - 1) * 0.5 * math.log(2.0 * math.pi)


def _norming_argument(model: ExpansionModel, n_or_lam: float) -> float:
    if model in (ExpansionModel.SYMMETRIC, ExpansionModel.POISSON_SYMMETRIC):
        return 2.0 * n_or_lam
    return n_or_lam


def _check_d(d: int) -> int:
    if int(d) != d or d < 1:
        raise ValueError("d must be a positive integer")
    return int(d)


def expected_volume_expansion(model: ExpansionModel, n_or_lam: float, d: int) -> AsymptoticExpansion:
    """kappa_d u^d + d kappa_d u^(d-2) (gamma - H_d + 1) with u = u_n, u_2n, u_lam or u_2lam."""
    d = _check_d(d)
    u = evt_norming_constant(_norming_argument(model, n_or_lam))
    kappa = math.exp(log_unit_ball_volume(d))
    return AsymptoticExpansion(
        u=u,
        leading=kappa * u**d,
        correction=d * kappa * u ** (d - 2) * gamma_correction_constant(d),
    )


def intrinsic_volume_expansion(family: ExpansionFamily, n: float, d: int) -> AsymptoticExpansion:
    """Two-term expansion of V_d of the regular simplex / crosspolytope."""
    d = _check_d(d)
    arg = 2.0 * n if family is ExpansionFamily.CROSSPOLYTOPE else n
    u = evt_norming_constant(arg)
    pref = (2.0 * math.pi) ** (0.5 * d) / math.factorial(d)
    return AsymptoticExpansion(
        u=u,
        leading=pref * u**d,
        correction=pref * d * u ** (d - 2) * gamma_correction_constant(d),
    )


def integral_asymptotic(alpha: float, n_or_lam: float, kind: IntegralKind) -> AsymptoticExpansion:
    """m^-alpha (u^(alpha-1) Gamma(alpha) + u^(alpha-3) (alpha-1) (Gamma(alpha) - Gamma'(alpha))).

    (m, u) is (n, u_n) for BINOMIAL, (2n, u_2n) for SYMMETRIC and (lam, u_lam)
    for POISSON.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    m = 2.0 * n_or_lam if kind is IntegralKind.SYMMETRIC else float(n_or_lam)
    u = evt_norming_constant(m)
    gam, _, psi = gamma_family(alpha)
    gamma_prime = gam * psi
    scale = m ** (-alpha)
    return AsymptoticExpansion(
        u=u,
        leading=scale * u ** (alpha - 1.0) * gam,
        correction=scale * u ** (alpha - 3.0) * (alpha - 1.0) * (gam - gamma_prime),
    )
