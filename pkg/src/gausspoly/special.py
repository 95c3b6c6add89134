"""Standard normal density/CDF, Gamma-family helpers and unit-ball volumes.

The scalar functions reject non-finite input; the ``*_array`` helpers are the
unchecked vectorised kernels used inside quadrature loops.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

EULER_GAMMA = 0.57721566490153286060651209008240243
LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _check_finite(t: float) -> float:
    t = float(t)
    if not math.isfinite(t):
        raise ValueError(f"argument must be finite, got {t!r}")
    return t


@dataclass(frozen=True)
class NormalEval:
    """Density, CDF and their logarithms at a single point."""

    t: float
    pdf: float
    cdf: float
    log_cdf: float
    log_pdf: float


def std_normal_pdf(t: float) -> float:
    t = _check_finite(t)
    return INV_SQRT_2PI * math.exp(-0.5 * t * t)


def std_normal_log_pdf(t: float) -> float:
    t = _check_finite(t)
    return -0.5 * t * t - LOG_SQRT_2PI


def std_normal_cdf(t: float) -> float:
    """Phi(t), evaluated through erfc so the left tail keeps full relative accuracy."""
    t = _check_finite(t)
    return float(_sp.ndtr(t))


def log_std_normal_cdf(t: float) -> float:
    """log Phi(t); finite down to at least t = -200."""
    t = _check_finite(t)
    return float(_sp.log_ndtr(t))


def normal_eval(t: float) -> NormalEval:
    t = _check_finite(t)
    log_pdf = std_normal_log_pdf(t)
    return NormalEval(
        t=t,
        pdf=std_normal_pdf(t),
        cdf=std_normal_cdf(t),
        log_cdf=log_std_normal_cdf(t),
        log_pdf=log_pdf,
    )


def normal_tail_expansion(t: float, order: int = 1) -> float:
    """Asymptotic approximation of the upper tail ``1 - Phi(t)``.

    ``order=0`` gives the Mills-ratio bound ``phi(t)/t``; ``order=1`` adds the
    first correction, ``phi(t)/t * (1 - 1/t**2)``.
    """
    t = _check_finite(t)
    if t <= 0:
        raise ValueError("normal_tail_expansion requires t > 0")
    if order not in (0, 1):
        raise ValueError("order must be 0 or 1")
    base = std_normal_pdf(t) / t
    if order == 1:
        base *= 1.0 - 1.0 / (t * t)
    return base


def unit_ball_volume(d: int) -> float:
    """Volume kappa_d = pi^(d/2) / Gamma(d/2 + 1) of the d-dimensional unit ball."""
    if d < 0 or int(d) != d:
        raise ValueError("dimension must be a non-negative integer")
    return math.exp(log_unit_ball_volume(int(d)))


def log_unit_ball_volume(d: int) -> float:
    return 0.5 * d * math.log(math.pi) - math.lgamma(0.5 * d + 1.0)


def gamma_family(alpha: float) -> tuple[float, float, float]:
    """Return ``(Gamma(alpha), log Gamma(alpha), digamma(alpha))``.

    The derivative Gamma'(alpha) is ``gamma * digamma``.
    """
    alpha = _check_finite(alpha)
    if alpha <= 0:
        raise ValueError("gamma_family requires alpha > 0")
    return float(_sp.gamma(alpha)), float(_sp.gammaln(alpha)), float(_sp.digamma(alpha))


def log_binomial(n: float, k: float) -> float:
    """log C(n, k) for real n >= k >= 0 via lgamma."""
    return math.lgamma(n + 1.0) - math.lgamma(k + 1.0) - math.lgamma(n - k + 1.0)


# -- vectorised kernels -----------------------------------------------------

def log_pdf_array(t: np.ndarray) -> np.ndarray:
    return -0.5 * t * t - LOG_SQRT_2PI


def log_cdf_array(t: np.ndarray) -> np.ndarray:
    return _sp.log_ndtr(t)


def log_central_mass_array(x_plus: np.ndarray, x_minus: np.ndarray) -> np.ndarray:
    """log(Phi(x_plus) - Phi(-x_minus)) for x_plus, x_minus >= 0.

    Small arguments go through erf (no cancellation near 0), large ones through
    log1p of the two upper tails.
    """
    x_plus = np.asarray(x_plus, dtype=float)
    x_minus = np.asarray(x_minus, dtype=float)
    r2 = math.sqrt(2.0)
    tails = 0.5 * (_sp.erfc(x_plus / r2) + _sp.erfc(x_minus / r2))
    with np.errstate(divide="ignore"):
        near = np.log(0.5 * (_sp.erf(x_plus / r2) + _sp.erf(x_minus / r2)))
        far = np.log1p(-np.minimum(tails, 1.0))
    return np.where(tails < 0.5, far, near)


def log_two_phi_minus_one_array(t: np.ndarray) -> np.ndarray:
    """log(2 Phi(t) - 1) for t >= 0 (``-inf`` at 0)."""
    t = np.asarray(t, dtype=float)
    return log_central_mass_array(t, t)
