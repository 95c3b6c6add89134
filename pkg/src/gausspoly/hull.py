"""Exact convex-hull and zonotope volumes for small point clouds (d <= 5).

d=1 is max - min, d=2 is Andrew's monotone chain with the shoelace sum, and
3 <= d <= 5 enumerates facets by brute force over d-subsets and decomposes
the hull into simplices from the centroid. Clouds that are too large for the
brute force, or that contain coplanar ties, go to Qhull.
"""
from __future__ import annotations

import itertools
import math

import numba
import numpy as np
from scipy.spatial import ConvexHull, QhullError

MAX_DIM = 5
BRUTE_FORCE_WORK = 2_000_000   # C(m, d) * m above this goes to Qhull
TIE_TOL = 1e-12
ZONOTOPE_BUDGET = 10**7
FALLBACK = -1.0


@numba.njit(cache=True, nogil=True)
def _area_2d(pts, m):
    if m < 3:
        return 0.0
    order = np.argsort(pts[:m, 0], kind="mergesort")
    # settle ties in x by y; the argsort output is nearly sorted
    for i in range(1, m):
        j = i
        while j > 0:
            a = order[j - 1]
            b = order[j]
            if pts[a, 0] > pts[b, 0] or (pts[a, 0] == pts[b, 0] and pts[a, 1] > pts[b, 1]):
                order[j - 1] = b
                order[j] = a
                j -= 1
            else:
                break
    hull = np.empty(2 * m, dtype=np.int64)
    h = 0
    for pass_ in range(2):
        start = h
        for ii in range(m):
            i = order[ii] if pass_ == 0 else order[m - 1 - ii]
            while h >= start + 2:
                o = hull[h - 2]
                a = hull[h - 1]
                cross = (pts[a, 0] - pts[o, 0]) * (pts[i, 1] - pts[o, 1]) - (pts[a, 1] - pts[o, 1]) * (pts[i, 0] - pts[o, 0])
                if cross <= 0.0:
                    h -= 1
                else:
                    break
            hull[h] = i
            h += 1
        h -= 1  # last point repeats as first point of the next chain
    if h < 3:
        return 0.0
    s = 0.0
    for i in range(h):
        a = hull[i]
        b = hull[(i + 1) % h]
        s += pts[a, 0] * pts[b, 1] - pts[b, 0] * pts[a, 1]
    return 0.5 * abs(s)


@numba.njit(cache=True, nogil=True)
def _det(mat):
    """Determinant by partial-pivot elimination; mat is overwritten."""
    n = mat.shape[0]
    det = 1.0
    for c in range(n):
        p = c
        best = abs(mat[c, c])
        for r in range(c + 1, n):
            if abs(mat[r, c]) > best:
                best = abs(mat[r, c])
                p = r
        if best == 0.0:
            return 0.0
        if p != c:
            for j in range(n):
                tmp = mat[c, j]
                mat[c, j] = mat[p, j]
                mat[p, j] = tmp
            det = -det
        det *= mat[c, c]
        for r in range(c + 1, n):
            f = mat[r, c] / mat[c, c]
            for j in range(c, n):
                mat[r, j] -= f * mat[c, j]
    return det


@numba.njit(cache=True, nogil=True)
def _next_combination(idx, m):
    d = idx.shape[0]
    i = d - 1
    while i >= 0 and idx[i] == m - d + i:
        i -= 1
    if i < 0:
        return False
    idx[i] += 1
    for j in range(i + 1, d):
        idx[j] = idx[j - 1] + 1
    return True


@numba.njit(cache=True, nogil=True)
def _volume_bruteforce(pts, m, d, factorial_d):
    """Facet enumeration; returns FALLBACK on ties or when no facet is found."""
    if m < d + 1:
        return 0.0
    centre = np.zeros(d)
    scale = 0.0
    for i in range(m):
        for j in range(d):
            centre[j] += pts[i, j]
            scale = max(scale, abs(pts[i, j]))
    for j in range(d):
        centre[j] /= m
    if scale == 0.0:
        return 0.0
    tol = TIE_TOL * scale
    idx = np.arange(d)
    edges = np.empty((d - 1, d))
    minor = np.empty((d - 1, d - 1))
    normal = np.empty(d)
    simplex = np.empty((d, d))
    total = 0.0
    facets = 0
    while True:
        for r in range(d - 1):
            for j in range(d):
                edges[r, j] = pts[idx[r + 1], j] - pts[idx[0], j]
        # generalised cross product of the d-1 edge vectors
        norm2 = 0.0
        for col in range(d):
            for r in range(d - 1):
                cc = 0
                for j in range(d):
                    if j != col:
                        minor[r, cc] = edges[r, j]
                        cc += 1
            v = _det(minor)
            normal[col] = v if col % 2 == 0 else -v
            norm2 += normal[col] * normal[col]
        nrm = math.sqrt(norm2)
        if nrm > 0.0:
            pos = 0
            neg = 0
            tie = False
            for q in range(m):
                member = False
                for r in range(d):
                    if idx[r] == q:
                        member = True
                if member:
                    continue
                s = 0.0
                for j in range(d):
                    s += normal[j] * (pts[q, j] - pts[idx[0], j])
                s /= nrm
                if s > tol:
                    pos += 1
                elif s < -tol:
                    neg += 1
                else:
                    tie = True
            if pos == 0 or neg == 0:
                if tie:
                    return FALLBACK
                for r in range(d):
                    for j in range(d):
                        simplex[r, j] = pts[idx[r], j] - centre[j]
                total += abs(_det(simplex))
                facets += 1
        if not _next_combination(idx, m):
            break
    if facets == 0:
        return FALLBACK
    return total / factorial_d


@numba.njit(cache=True, nogil=True)
def _batch_volumes(points, counts, d, max_work, out):
    """Hull volume of each cloud points[s, :counts[s]]; FALLBACK marks Qhull cases."""
    fact = 1.0
    for j in range(2, d + 1):
        fact *= j
    for s in range(points.shape[0]):
        m = counts[s]
        pts = points[s]
        if d == 1:
            if m == 0:
                out[s] = 0.0
            else:
                lo = pts[0, 0]
                hi = pts[0, 0]
                for i in range(1, m):
                    lo = min(lo, pts[i, 0])
                    hi = max(hi, pts[i, 0])
                out[s] = hi - lo
        elif d == 2:
            out[s] = _area_2d(pts, m)
        else:
            work = 1.0
            for j in range(d):
                work = work * (m - j) / (j + 1)
            if work * m > max_work:
                out[s] = FALLBACK
            else:
                out[s] = _volume_bruteforce(pts, m, d, fact)


def _qhull_volume(pts: np.ndarray) -> float:
    if pts.shape[0] < pts.shape[1] + 1:
        return 0.0
    try:
        return float(ConvexHull(pts).volume)
    except QhullError:
        return 0.0   # lower-dimensional cloud


def batch_hull_volumes(points: np.ndarray, counts: np.ndarray | None = None) -> np.ndarray:
    """Hull volumes of a stack of clouds, shape (samples, max_points, d).

    ``counts[s]`` gives the number of valid leading rows of cloud s.
    """
    points = np.ascontiguousarray(points, dtype=float)
    s, mmax, d = points.shape
    if d > MAX_DIM:
        raise ValueError(f"hull volumes are capped at d={MAX_DIM}, got d={d}")
    if counts is None:
        counts = np.full(s, mmax, dtype=np.int64)
    counts = np.ascontiguousarray(counts, dtype=np.int64)
    out = np.empty(s)
    _batch_volumes(points, counts, d, float(BRUTE_FORCE_WORK), out)
    for i in np.flatnonzero(out == FALLBACK):
        out[i] = _qhull_volume(points[i, : counts[i]])
    return out


@numba.njit(cache=True, nogil=True)
def _batch_zonotope(points, combos, out):
    d = points.shape[2]
    mat = np.empty((d, d))
    for s in range(points.shape[0]):
        total = 0.0
        for c in range(combos.shape[0]):
            for r in range(d):
                for j in range(d):
                    mat[r, j] = points[s, combos[c, r], j]
            total += abs(_det(mat))
        out[s] = total


def zonotope_combinations(n: int, d: int) -> np.ndarray:
    terms = math.comb(n, d)
    if terms > ZONOTOPE_BUDGET:
        raise ValueError(f"C({n},{d})={terms} exceeds the zonotope subset budget {ZONOTOPE_BUDGET}")
    if n < d:
        raise ValueError(f"a zonotope volume needs n >= d, got n={n}, d={d}")
    return np.array(list(itertools.combinations(range(n), d)), dtype=np.int64).reshape(terms, d)


def batch_zonotope_volumes(points: np.ndarray) -> np.ndarray:
    """Sum over d-subsets of |det| for each stack entry, shape (samples, n, d)."""
    points = np.ascontiguousarray(points, dtype=float)
    s, n, d = points.shape
    combos = zonotope_combinations(n, d)
    out = np.empty(s)
    _batch_zonotope(points, combos, out)
    return out
