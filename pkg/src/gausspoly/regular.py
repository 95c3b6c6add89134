"""External angles and intrinsic volumes of regular polytope families.

Covered: the regular simplex conv[e_1..e_n] (SIMPLEX, dimension n-1), the
crosspolytope conv[+-e_i] (CROSSPOLYTOPE), the rectangular simplex
conv[0, e_1..e_n] (RECT_SIMPLEX), the unit cube and axis-parallel boxes.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

from gausspoly.quadrature import DEFAULT_REL_TOL, GaussianPowerIntegrand, IntegrandKind, integrate

LOG_2PI = math.log(2.0 * math.pi)
# above this n the combinatorial prefactors are assembled in log space
EXACT_PREFACTOR_MAX_N = 30


class Family(enum.Enum):
    SIMPLEX = "simplex"
    CROSSPOLYTOPE = "crosspolytope"
    RECT_SIMPLEX = "rect_simplex"
    CUBE = "cube"
    PARALLELOTOPE = "parallelotope"


@dataclass(frozen=True)
class RegularFamily:
    tag: Family
    n: int
    sides: tuple[float, ...] | None = None

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")
        if self.tag is Family.PARALLELOTOPE:
            if self.sides is None or len(self.sides) != self.n:
                raise ValueError("PARALLELOTOPE needs exactly n side lengths")
            if any(not (s > 0 and math.isfinite(s)) for s in self.sides):
                raise ValueError("side lengths must be finite and positive")
        elif self.sides is not None:
            raise ValueError("sides are only meaningful for PARALLELOTOPE")

    @classmethod
    def parallelotope(cls, sides) -> RegularFamily:
        sides = tuple(float(s) for s in sides)
        return cls(Family.PARALLELOTOPE, len(sides), sides)

    @property
    def dim(self) -> int:
        return self.n - 1 if self.tag is Family.SIMPLEX else self.n


def _check_k(k: int, upper: int, what: str) -> int:
    if int(k) != k or not 0 <= k <= upper:
        raise ValueError(f"{what} index k={k} outside 0..{upper}")
    return int(k)


@lru_cache(maxsize=4096)
def angle_integral(tag: Family, n: int, k: int, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """The integral inside the external-angle formula of a k-face.

    SIMPLEX: int_R Phi^(n-k-1) phi^(k+1); CROSSPOLYTOPE: int_0^inf
    (2Phi-1)^(n-k-1) phi^(k+1); RECT_SIMPLEX: int_0^inf Phi^(n-k-1) phi^(k+1).
    """
    kind = {
        Family.SIMPLEX: IntegrandKind.FULL_LINE_PHI,
        Family.CROSSPOLYTOPE: IntegrandKind.HALF_LINE_SYMMETRIC,
        Family.RECT_SIMPLEX: IntegrandKind.HALF_LINE_PHI,
    }[tag]
    return integrate(GaussianPowerIntegrand(n - k - 1, k + 1, kind=kind), rel_tol=rel_tol).value


def _face_prefactor(n: int, k: int) -> float:
    """(2 pi)^(k/2) * C(n, k+1) * (k+1) / k!"""
    if n <= EXACT_PREFACTOR_MAX_N:
        return (2.0 * math.pi) ** (0.5 * k) * (math.comb(n, k + 1) * (k + 1) / math.factorial(k))
    log_val = (
        0.5 * k * LOG_2PI
        + math.lgamma(n + 1) - math.lgamma(k + 2) - math.lgamma(n - k)
        + math.log(k + 1) - math.lgamma(k + 1)
    )
    return math.exp(log_val)


def external_angle(family: RegularFamily, k: int, rel_tol: float = DEFAULT_REL_TOL, clamp: bool = True) -> float:
    """External angle at a k-face (for RECT_SIMPLEX: a k-face avoiding 0).

    ``clamp=False`` returns the raw quadrature value, which may overshoot 1
    by the integration error.
    """
    if family.tag not in (Family.SIMPLEX, Family.CROSSPOLYTOPE, Family.RECT_SIMPLEX):
        raise ValueError(f"external angles of {family.tag.value} are not supported")
    k = _check_k(k, family.n - 1, "face")
    pref = math.exp(0.5 * k * LOG_2PI + 0.5 * math.log(k + 1))
    raw = pref * angle_integral(family.tag, family.n, k, rel_tol)
    return min(1.0, raw) if clamp else raw


def face_data(family: RegularFamily, k: int) -> tuple[int, float]:
    """Number of k-faces and the k-volume of each (all congruent)."""
    if family.tag not in (Family.SIMPLEX, Family.CROSSPOLYTOPE):
        raise ValueError("face_data is defined for SIMPLEX and CROSSPOLYTOPE")
    n = family.n
    k = _check_k(k, n - 1, "face")
    count = math.comb(n, k + 1)
    if family.tag is Family.CROSSPOLYTOPE:
        count *= 2 ** (k + 1)
    return count, math.sqrt(k + 1) / math.factorial(k)


def intrinsic_volume(family: RegularFamily, k: int, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """k-th intrinsic volume V_k of the polytope."""
    from gausspoly.heteroscedastic import elementary_symmetric

    n = family.n
    k = _check_k(k, family.dim, "intrinsic volume")
    tag = family.tag
    if tag is Family.CUBE:
        return float(math.comb(n, k))
    if tag is Family.PARALLELOTOPE:
        return elementary_symmetric(family.sides, k)
    if tag is Family.SIMPLEX:
        if k == n - 1:
            return math.sqrt(n) / math.factorial(n - 1)
        return _face_prefactor(n, k) * angle_integral(tag, n, k, rel_tol)
    if tag is Family.CROSSPOLYTOPE:
        if k == n:
            return 2.0**n / math.factorial(n)
        return _face_prefactor(n, k) * 2.0 ** (k + 1) * angle_integral(tag, n, k, rel_tol)
    # RECT_SIMPLEX: vertex-at-origin term plus the faces avoiding 0
    if n <= EXACT_PREFACTOR_MAX_N:
        corner = math.comb(n, k) / (math.factorial(k) * 2.0 ** (n - k))
    else:
        corner = math.exp(
            math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
            - math.lgamma(k + 1) - (n - k) * math.log(2.0)
        )
    if k == n:
        return corner
    return corner + _face_prefactor(n, k) * angle_integral(tag, n, k, rel_tol)
