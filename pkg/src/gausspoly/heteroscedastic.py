"""Intrinsic volumes of scaled simplices and generalised crosspolytopes.

The simplex is conv[l_1 e_1, ..., l_n e_n]; the generalised crosspolytope is
conv[l_i^+ e_i, -l_i^- e_i]. Both are handled face by face: every
(m-1)-face is again a scaled simplex, and its external angle reduces to a
one-dimensional integral. Substituting y = sigma_* x keeps the integrand in
standard form even when some scale is tiny (sigma_* huge).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from gausspoly.quadrature import DEFAULT_REL_TOL, GaussianPowerIntegrand, IntegrandKind, integrate

SIMPLEX_CAP = 22
CROSSPOLYTOPE_CAP = 18


class CombinatorialBlowup(ValueError):
    def __init__(self, n: int, cap: int, terms: int):
        super().__init__(
            f"n={n} exceeds the combinatorial cap {cap}; the face sum would need {terms} terms"
        )
        self.n = n
        self.cap = cap
        self.terms = terms


def _positive_tuple(values, what: str) -> tuple[float, ...]:
    out = tuple(float(v) for v in values)
    if not out:
        raise ValueError(f"{what} must be non-empty")
    if any(not (v > 0 and math.isfinite(v)) for v in out):
        raise ValueError(f"{what} must be finite and strictly positive")
    return out


@dataclass(frozen=True)
class ScaleVector:
    scales: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "scales", _positive_tuple(self.scales, "scales"))

    def __len__(self):
        return len(self.scales)


@dataclass(frozen=True)
class SignedScaleVector:
    plus: tuple[float, ...]
    minus: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "plus", _positive_tuple(self.plus, "plus scales"))
        object.__setattr__(self, "minus", _positive_tuple(self.minus, "minus scales"))
        if len(self.plus) != len(self.minus):
            raise ValueError("plus and minus scales must have equal length")

    def __len__(self):
        return len(self.plus)


def elementary_symmetric(values, k: int) -> float:
    """s_k(values): sum of all products of k distinct entries.

    Built by multiplying out prod_i (1 + v_i x) one factor at a time.
    """
    values = [float(v) for v in values]
    if int(k) != k or not 0 <= k <= len(values):
        raise ValueError(f"k={k} outside 0..{len(values)}")
    coeffs = [1.0] + [0.0] * k
    for v in values:
        for j in range(k, 0, -1):
            coeffs[j] += v * coeffs[j - 1]
    return coeffs[k]


def simplex_facet_volume(scales) -> float:
    """(n-1)-volume of conv[l_1 e_1, ..., l_n e_n]."""
    ls = _positive_tuple(scales.scales if isinstance(scales, ScaleVector) else scales, "scales")
    n = len(ls)
    log_prod = sum(math.log(v) for v in ls)
    return math.exp(log_prod - math.lgamma(n)) * math.sqrt(sum(1.0 / (v * v) for v in ls))


def _check_m(m: int, upper: int) -> int:
    if int(m) != m or not 1 <= m <= upper:
        raise ValueError(f"m={m} outside 1..{upper}")
    return int(m)


class _AngleCache:
    """Memoises external-angle integrals keyed on (sigma^2, complement multiset)."""

    def __init__(self, half_line: bool, rel_tol: float):
        self.half_line = half_line
        self.rel_tol = rel_tol
        self._store: dict = {}
        self.quadratures = 0

    def angle(self, sigma: float, plus: tuple[float, ...], minus: tuple[float, ...] | None = None) -> float:
        if not plus:
            return 0.5 if self.half_line else 1.0
        if minus is None:
            key = (sigma, tuple(sorted(plus)), None)
        else:
            key = (sigma, tuple(sorted(zip(plus, minus))), True)
        hit = self._store.get(key)
        if hit is not None:
            return hit
        kind = IntegrandKind.HALF_LINE_PHI if self.half_line else IntegrandKind.FULL_LINE_PHI
        integrand = GaussianPowerIntegrand(
            cdf_power=0.0,
            pdf_power=1.0,
            kind=kind,
            scales=tuple(sigma * v for v in plus),
            scales_minus=None if minus is None else tuple(sigma * v for v in minus),
        )
        val = integrate(integrand, rel_tol=self.rel_tol).value
        self.quadratures += 1
        self._store[key] = val
        return val


def _face_volume_times_factorial(face_scales) -> tuple[float, float]:
    """Return ((m-1)! * Vol_{m-1}(face), sigma_*) for a scaled-simplex face."""
    inv_sq = math.fsum(1.0 / (v * v) for v in face_scales)
    sigma = math.sqrt(inv_sq)
    return math.prod(face_scales) * sigma, sigma


def simplex_intrinsic_volume(
    scales: ScaleVector, m: int, cap: int = SIMPLEX_CAP, rel_tol: float = DEFAULT_REL_TOL
) -> float:
    """V_{m-1} of conv[l_1 e_1, ..., l_n e_n], summed over all (m-1)-faces."""
    if not isinstance(scales, ScaleVector):
        scales = ScaleVector(tuple(scales))
    ls = scales.scales
    n = len(ls)
    m = _check_m(m, n)
    if n > cap:
        raise CombinatorialBlowup(n, cap, math.comb(n, m))
    cache = _AngleCache(half_line=False, rel_tol=rel_tol)
    terms = []
    for idx in itertools.combinations(range(n), m):
        chosen = set(idx)
        vol, sigma = _face_volume_times_factorial([ls[i] for i in idx])
        rest = tuple(ls[i] for i in range(n) if i not in chosen)
        terms.append(vol * cache.angle(sigma, rest))
    return math.fsum(terms) / math.factorial(m - 1)


def crosspolytope_intrinsic_volume(
    scales: SignedScaleVector, m: int, cap: int = CROSSPOLYTOPE_CAP, rel_tol: float = DEFAULT_REL_TOL
) -> float:
    """V_{m-1} of conv[l_i^+ e_i, -l_i^- e_i], summed over faces and sign patterns.

    ``m = n + 1`` returns the full volume prod_i (l_i^+ + l_i^-) / n!.
    """
    plus, minus = scales.plus, scales.minus
    n = len(plus)
    if m == n + 1:
        return math.prod(p + q for p, q in zip(plus, minus)) / math.factorial(n)
    m = _check_m(m, n)
    if n > cap:
        raise CombinatorialBlowup(n, cap, math.comb(n, m) * 2**m)
    cache = _AngleCache(half_line=True, rel_tol=rel_tol)
    terms = []
    for idx in itertools.combinations(range(n), m):
        chosen = set(idx)
        rest_plus = tuple(plus[i] for i in range(n) if i not in chosen)
        rest_minus = tuple(minus[i] for i in range(n) if i not in chosen)
        for signs in itertools.product((0, 1), repeat=m):
            face = [plus[i] if s == 0 else minus[i] for i, s in zip(idx, signs)]
            vol, sigma = _face_volume_times_factorial(face)
            angle = cache.angle(sigma, rest_plus, rest_minus) if rest_plus else 0.5
            terms.append(vol * angle)
    return math.fsum(terms) / math.factorial(m - 1)


def symmetric_crosspolytope_intrinsic_volume(
    scales, m: int, cap: int = CROSSPOLYTOPE_CAP, rel_tol: float = DEFAULT_REL_TOL
) -> float:
    """V_{m-1} of conv[+-l_i e_i] with the sign sum collapsed into a factor 2^m.

    Independent of :func:`crosspolytope_intrinsic_volume`; used to cross-check it.
    """
    ls = _positive_tuple(scales, "scales")
    n = len(ls)
    m = _check_m(m, n)
    if n > cap:
        raise CombinatorialBlowup(n, cap, math.comb(n, m))
    terms = []
    for idx in itertools.combinations(range(n), m):
        chosen = set(idx)
        vol, sigma = _face_volume_times_factorial([ls[i] for i in idx])
        rest = tuple(sigma * ls[i] for i in range(n) if i not in chosen)
        if rest:
            # prod (2 Phi(y / (sigma l_i)) - 1) on the half line
            integrand = GaussianPowerIntegrand(
                0.0, 1.0, kind=IntegrandKind.HALF_LINE_PHI, scales=rest, scales_minus=rest
            )
            angle = integrate(integrand, rel_tol=rel_tol).value
        else:
            angle = 0.5
        terms.append(vol * angle)
    return 2.0**m * math.fsum(terms) / math.factorial(m - 1)


def rect_simplex_intrinsic_volume(
    scales: ScaleVector, m: int, cap: int = SIMPLEX_CAP, rel_tol: float = DEFAULT_REL_TOL
) -> float:
    """V_{m-1} of conv[0, l_1 e_1, ..., l_N e_N] for the N given scales (1 <= m <= N+1)."""
    if not isinstance(scales, ScaleVector):
        scales = ScaleVector(tuple(scales))
    ls = scales.scales
    big_n = len(ls)
    m = _check_m(m, big_n + 1)
    if big_n + 1 > cap:
        raise CombinatorialBlowup(big_n + 1, cap, math.comb(big_n, min(m, big_n)) + math.comb(big_n, m - 1))
    corner = elementary_symmetric(ls, m - 1) / 2.0 ** (big_n + 1 - m)
    cache = _AngleCache(half_line=True, rel_tol=rel_tol)
    terms = [corner]
    if m <= big_n:
        for idx in itertools.combinations(range(big_n), m):
            chosen = set(idx)
            vol, sigma = _face_volume_times_factorial([ls[i] for i in idx])
            rest = tuple(ls[i] for i in range(big_n) if i not in chosen)
            terms.append(vol * cache.angle(sigma, rest))
    return math.fsum(terms) / math.factorial(m - 1)


def heteroscedastic_expected_volume(scales, d: int, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """E Vol_d of conv[l_i X_i] (ScaleVector) or conv[l_i^+ X_i, -l_i^- X_i] (SignedScaleVector)."""
    if int(d) != d or d < 1:
        raise ValueError("d must be a positive integer")
    if isinstance(scales, SignedScaleVector):
        if d > len(scales):
            raise ValueError(f"d={d} exceeds n={len(scales)} for the crosspolytope model")
        v = crosspolytope_intrinsic_volume(scales, d + 1, rel_tol=rel_tol)
    else:
        if not isinstance(scales, ScaleVector):
            scales = ScaleVector(tuple(scales))
        if d + 1 > len(scales):
            raise ValueError(f"the simplex model needs d+1 <= n, got d={d}, n={len(scales)}")
        v = simplex_intrinsic_volume(scales, d + 1, rel_tol=rel_tol)
    log_norm = math.lgamma(d + 1) - math.lgamma(0.5 * d + 1.0) - 0.5 * d * math.log(2.0)
    return math.exp(log_norm) * v
