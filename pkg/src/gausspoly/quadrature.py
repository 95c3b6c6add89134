"""Adaptive Gauss-Kronrod integration of Gaussian power integrands.

Every integrand handled here has the shape

    t**p * exp(a * log F(t) + b * log phi(t) + sum_i log G_i(t))

where ``F`` is Phi, 2*Phi - 1 or the Poisson factor ``exp(lam*(Phi - 1))`` and
``G_i`` are optional scale factors Phi(t/l_i) or Phi(t/l_i^+) - Phi(-t/l_i^-).
All powers are combined in log space and exponentiated once per abscissa, so
Phi**n * phi**k survives n in the millions.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special as _sp

from gausspoly.special import (
    log_cdf_array,
    log_central_mass_array,
    log_pdf_array,
    log_two_phi_minus_one_array,
)

DEFAULT_REL_TOL = 1e-10
DEFAULT_ABS_TOL = 1e-300
DEFAULT_BUDGET = 10**6
# log-integrand margin below the tolerance used when truncating the domain
TRUNCATION_MARGIN = 50.0

# Kronrod 15-point abscissae/weights (non-negative half) and the embedded
# Gauss 7-point weights, from QUADPACK qk15.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-node layout: -x0..-x6, 0, x6..x0
NODES = np.concatenate([-_XGK[:7], [0.0], _XGK[6::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:7], [_WGK[7]], _WGK[6::-1]])
GAUSS_WEIGHTS = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod abscissae x1, x3, x5 and 0
for _i, _j in ((1, 0), (3, 1), (5, 2)):
    GAUSS_WEIGHTS[_i] = _WG[_j]
    GAUSS_WEIGHTS[14 - _i] = _WG[_j]
GAUSS_WEIGHTS[7] = _WG[3]

_EPMACH = np.finfo(float).eps
_UFLOW = np.finfo(float).tiny


class IntegrandKind(enum.Enum):
    FULL_LINE_PHI = "full_line_phi"
    HALF_LINE_SYMMETRIC = "half_line_symmetric"
    HALF_LINE_PHI = "half_line_phi"
    POISSON = "poisson"


class NonConvergence(RuntimeError):
    """The evaluation budget ran out before the error target was met."""

    def __init__(self, message: str, partial: QuadResult):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error: float
    evaluations: int


@dataclass(frozen=True)
class GaussianPowerIntegrand:
    """Integrand ``t**p * F(t)**a * phi(t)**b * prod_i G_i(t)``.

    ``scales`` alone contributes Phi(t/l_i) factors; together with
    ``scales_minus`` it contributes Phi(t/l_i^+) - Phi(-t/l_i^-), which is
    only defined on the half line. ``lower``/``upper`` optionally clip the
    natural domain of ``kind`` (POISSON defaults to the whole line).
    """

    cdf_power: float = 0.0
    pdf_power: float = 1.0
    monomial_degree: int = 0
    kind: IntegrandKind = IntegrandKind.FULL_LINE_PHI
    rate: float = 0.0
    scales: tuple[float, ...] | None = None
    scales_minus: tuple[float, ...] | None = None
    lower: float | None = None
    upper: float | None = None
    _scale_groups: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.cdf_power >= 0 or not math.isfinite(self.cdf_power):
            raise ValueError("cdf_power must be a finite non-negative number")
        if not self.pdf_power > 0 or not math.isfinite(self.pdf_power):
            raise ValueError("pdf_power must be a finite positive number")
        if self.monomial_degree not in (0, 1):
            raise ValueError("monomial_degree must be 0 or 1")
        if self.kind is IntegrandKind.POISSON:
            if not self.rate >= 0 or not math.isfinite(self.rate):
                raise ValueError("POISSON integrands need a finite rate >= 0")
        elif self.rate != 0:
            raise ValueError("rate is only meaningful for POISSON integrands")
        groups = ()
        if self.scales is not None:
            plus = np.asarray(self.scales, dtype=float)
            if plus.ndim != 1 or np.any(~(plus > 0)) or np.any(~np.isfinite(plus)):
                raise ValueError("scale entries must be finite and strictly positive")
            if self.scales_minus is not None:
                minus = np.asarray(self.scales_minus, dtype=float)
                if minus.shape != plus.shape:
                    raise ValueError("scales and scales_minus must have equal length")
                if np.any(~(minus > 0)) or np.any(~np.isfinite(minus)):
                    raise ValueError("scale entries must be finite and strictly positive")
                pairs, counts = np.unique(np.stack([plus, minus], axis=1), axis=0, return_counts=True)
                groups = tuple((float(p), float(m), int(c)) for (p, m), c in zip(pairs, counts))
            else:
                vals, counts = np.unique(plus, return_counts=True)
                groups = tuple((float(v), None, int(c)) for v, c in zip(vals, counts))
        elif self.scales_minus is not None:
            raise ValueError("scales_minus given without scales")
        object.__setattr__(self, "_scale_groups", groups)
        lo, hi = self.domain()
        if not lo < hi:
            raise ValueError(f"empty integration domain [{lo}, {hi}]")
        if self.scales_minus is not None and lo < 0:
            raise ValueError("signed scale factors require a domain inside [0, inf)")

    @property
    def signed(self) -> bool:
        return self.scales_minus is not None

    def domain(self) -> tuple[float, float]:
        if self.kind in (IntegrandKind.HALF_LINE_SYMMETRIC, IntegrandKind.HALF_LINE_PHI):
            lo = 0.0
        else:
            lo = -math.inf
        hi = math.inf
        if self.lower is not None:
            lo = max(lo, float(self.lower))
        if self.upper is not None:
            hi = min(hi, float(self.upper))
        return lo, hi

    def log_envelope(self, t) -> np.ndarray:
        """log of the integrand without the monomial factor."""
        t = np.asarray(t, dtype=float)
        a = self.cdf_power
        acc = self.pdf_power * log_pdf_array(t)
        if self.kind is IntegrandKind.POISSON:
            if self.rate:
                acc = acc - self.rate * _sp.ndtr(-t)
        elif a:
            if self.kind is IntegrandKind.HALF_LINE_SYMMETRIC:
                acc = acc + a * log_two_phi_minus_one_array(t)
            else:
                acc = acc + a * log_cdf_array(t)
        for plus, minus, count in self._scale_groups:
            if minus is None:
                acc = acc + count * log_cdf_array(t / plus)
            else:
                acc = acc + count * log_central_mass_array(t / plus, t / minus)
        return acc

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = np.exp(self.log_envelope(t))
        val = np.where(np.isnan(val), 0.0, val)
        if self.monomial_degree == 1:
            val = val * t
        return val


def _envelope(integrand: GaussianPowerIntegrand, t: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        g = integrand.log_envelope(t)
    return np.where(np.isnan(g), -np.inf, g)


def _mode(integrand: GaussianPowerIntegrand) -> tuple[float, float]:
    """Locate the maximiser of the (unimodal) log envelope by nested grids."""
    lo, hi = integrand.domain()
    width = max(40.0 / math.sqrt(integrand.pdf_power), 12.0)
    a = max(lo, -width)
    b = min(hi, width)
    for _ in range(60):
        grid = np.linspace(a, b, 401)
        g = _envelope(integrand, grid)
        i = int(np.argmax(g))
        grow_left = i == 0 and a > lo
        grow_right = i == len(grid) - 1 and b < hi
        if not (grow_left or grow_right):
            break
        span = b - a
        if grow_left:
            a = max(lo, a - 2.0 * span)
        if grow_right:
            b = min(hi, b + 2.0 * span)
    for _ in range(2):
        left = grid[max(i - 1, 0)]
        right = grid[min(i + 1, len(grid) - 1)]
        grid = np.linspace(left, right, 201)
        g = _envelope(integrand, grid)
        i = int(np.argmax(g))
    return float(grid[i]), float(g[i])


def _walk(integrand, start: float, stop: float, cutoff: float, direction: float) -> float:
    """Return a point beyond ``start`` (towards ``stop``) where the envelope is below cutoff."""
    step = max(1.0 / math.sqrt(integrand.pdf_power), 1e-3)
    offsets = step * 2.0 ** np.arange(0, 48)
    cand = start + direction * offsets
    inside_domain = cand < stop if direction > 0 else cand > stop
    cand = cand[inside_domain]
    if cand.size == 0:
        return stop
    below = ~(_envelope(integrand, cand) >= cutoff)
    if not below.any():
        return stop
    j = int(np.argmax(below))
    inside = start if j == 0 else cand[j - 1]
    outside = cand[j]
    fine = np.linspace(inside, outside, 129)
    below = ~(_envelope(integrand, fine) >= cutoff)
    return float(fine[int(np.argmax(below))])


def truncation_bounds(
    integrand: GaussianPowerIntegrand,
    abs_tol: float = DEFAULT_ABS_TOL,
    rel_tol: float | None = None,
    mode: tuple[float, float] | None = None,
) -> tuple[float, float]:
    """Finite interval outside which the log integrand is negligible.

    The cutoff is ``log(abs_tol) - 50``, lowered further to
    ``log(max) + log(rel_tol) - 50`` when ``rel_tol`` is given.
    """
    if not abs_tol > 0:
        raise ValueError("abs_tol must be positive")
    t_max, g_max = mode if mode is not None else _mode(integrand)
    cutoff = math.log(abs_tol)
    if rel_tol is not None:
        cutoff = min(cutoff, g_max + math.log(rel_tol))
    cutoff -= TRUNCATION_MARGIN
    lo, hi = integrand.domain()
    return _walk(integrand, t_max, lo, cutoff, -1.0), _walk(integrand, t_max, hi, cutoff, +1.0)


def _gk15(f, a: np.ndarray, b: np.ndarray):
    centre = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = centre[:, None] + half[:, None] * NODES[None, :]
    fx = f(x.ravel()).reshape(x.shape)
    resk = half * (fx @ KRONROD_WEIGHTS)
    resg = half * (fx @ GAUSS_WEIGHTS)
    resabs = np.abs(half) * (np.abs(fx) @ KRONROD_WEIGHTS)
    mean = resk / np.where(half == 0, 1.0, 2.0 * half)
    resasc = np.abs(half) * (np.abs(fx - mean[:, None]) @ KRONROD_WEIGHTS)
    err = np.abs(resk - resg)
    scale = np.where(resasc > 0, np.minimum(1.0, (200.0 * err / np.where(resasc > 0, resasc, 1.0)) ** 1.5), 1.0)
    err = np.where((resasc > 0) & (err > 0), resasc * scale, err)
    floor = 50.0 * _EPMACH * resabs
    err = np.where(resabs > _UFLOW / (50.0 * _EPMACH), np.maximum(err, floor), err)
    return resk, err


def integrate(
    integrand: GaussianPowerIntegrand,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
    budget: int = DEFAULT_BUDGET,
) -> QuadResult:
    """Integrate over the (truncated) natural domain with globally adaptive GK15.

    Raises :class:`NonConvergence` carrying the partial result when more than
    ``budget`` integrand evaluations would be needed.
    """
    if not (0 < rel_tol <= 1e-2) or not (0 < abs_tol <= 1e-2):
        raise ValueError("tolerances must lie in (0, 1e-2]")
    mode = _mode(integrand)
    t_max = mode[0]
    lo, hi = truncation_bounds(integrand, abs_tol, rel_tol, mode)
    breaks = {lo, hi}
    if lo < t_max < hi:
        breaks.add(t_max)
    if lo < 0.0 < hi:
        breaks.add(0.0)
    pts = np.array(sorted(breaks))
    # 8 equal pieces per initial segment
    a = np.concatenate([np.linspace(p, q, 9)[:-1] for p, q in zip(pts[:-1], pts[1:])])
    b = np.concatenate([np.linspace(p, q, 9)[1:] for p, q in zip(pts[:-1], pts[1:])])
    vals, errs = _gk15(integrand, a, b)
    evaluations = 15 * len(a)
    while True:
        total = float(np.sum(vals))
        total_err = float(np.sum(errs))
        target = max(abs_tol, rel_tol * abs(total))
        if total_err <= target:
            return QuadResult(total, total_err, evaluations)
        order = np.argsort(-errs, kind="stable")
        remaining = total_err - np.cumsum(errs[order])
        n_split = int(np.searchsorted(-remaining, -0.5 * target)) + 1
        chosen = order[:n_split]
        if evaluations + 30 * len(chosen) > budget:
            raise NonConvergence(
                f"evaluation budget {budget} exhausted (estimate {total!r} +/- {total_err:.3g})",
                QuadResult(total, total_err, evaluations),
            )
        keep = np.ones(len(a), dtype=bool)
        keep[chosen] = False
        mid = 0.5 * (a[chosen] + b[chosen])
        new_a = np.concatenate([a[chosen], mid])
        new_b = np.concatenate([mid, b[chosen]])
        new_vals, new_errs = _gk15(integrand, new_a, new_b)
        evaluations += 15 * len(new_a)
        a = np.concatenate([a[keep], new_a])
        b = np.concatenate([b[keep], new_b])
        vals = np.concatenate([vals[keep], new_vals])
        errs = np.concatenate([errs[keep], new_errs])


def integrate_value(integrand: GaussianPowerIntegrand, rel_tol: float = DEFAULT_REL_TOL) -> float:
    return integrate(integrand, rel_tol=rel_tol).value
