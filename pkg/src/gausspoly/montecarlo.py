"""Monte Carlo oracles for expected volumes and multiplicity events.

Streams: ``SeedSequence(seed).spawn(workers)`` gives one PCG64 generator per
worker; normals come from numpy's ziggurat sampler. Worker w handles a fixed
contiguous share of the replications in fixed-size chunks, and the per-worker
(count, mean, M2) summaries are merged in worker order, so a given
(parameters, seed, workers, samples) always reproduces the same mean.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from gausspoly.expectations import Model, RandomPolytopeModel
from gausspoly.heteroscedastic import ScaleVector, SignedScaleVector
from gausspoly.hull import MAX_DIM, batch_hull_volumes, batch_zonotope_volumes, zonotope_combinations
from gausspoly.orderstats import Moment, MomentFunction, SampleFamily

THREADS_ENV = "GAUSSPOLY_THREADS"
MIN_SAMPLES = 100
CHUNK_FLOATS = 1 << 21


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int
    workers: int


@dataclass(frozen=True)
class PointCloud:
    d: int
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1 and self.d == 1:
            pts = pts.reshape(-1, 1)
        if int(self.d) != self.d or self.d < 1:
            raise ValueError("d must be a positive integer")
        if pts.ndim != 2 or pts.shape[1] != self.d:
            raise ValueError(f"points must have shape (n, {self.d}), got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point coordinates must be finite")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]


class HullMode:
    PLAIN = "plain"
    SYMMETRIC = "symmetric"
    WITH_ZERO = "with_zero"
    ALL = (PLAIN, SYMMETRIC, WITH_ZERO)


def default_workers() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == "":
        return 1
    try:
        w = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if w < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return w


def sample_gaussian_points(n: int, d: int, rng: np.random.Generator) -> PointCloud:
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    return PointCloud(d, rng.standard_normal((n, d)))


def _augment(points: np.ndarray, mode: str) -> np.ndarray:
    """Apply a hull mode to a stack of clouds, shape (..., n, d)."""
    if mode == HullMode.PLAIN:
        return points
    if mode == HullMode.SYMMETRIC:
        return np.concatenate([points, -points], axis=-2)
    if mode == HullMode.WITH_ZERO:
        zero = np.zeros(points.shape[:-2] + (1, points.shape[-1]))
        return np.concatenate([points, zero], axis=-2)
    raise ValueError(f"unknown hull mode {mode!r}; expected one of {HullMode.ALL}")


def hull_volume(cloud: PointCloud, mode: str = HullMode.PLAIN) -> float:
    """Volume of conv of the cloud, of the cloud and its reflection, or of the cloud and 0."""
    if cloud.d > MAX_DIM:
        raise ValueError(f"hull volumes are capped at d={MAX_DIM}, got d={cloud.d}")
    pts = _augment(cloud.points, mode)
    return float(batch_hull_volumes(pts[None])[0])


def zonotope_volume_exact(cloud: PointCloud) -> float:
    """Volume of sum [0, X_i]: sum over d-subsets of |det|."""
    zonotope_combinations(cloud.n, cloud.d)   # budget check
    return float(batch_zonotope_volumes(cloud.points[None])[0])


# -- parallel driver ----------------------------------------------------------

def _welford(values: np.ndarray) -> tuple[int, float, float]:
    mean = float(np.mean(values))
    return values.size, mean, float(np.sum((values - mean) ** 2))


def _merge(a, b):
    """Chan's pairwise combination of (count, mean, M2)."""
    na, ma, sa = a
    nb, mb, sb = b
    if na == 0:
        return b
    if nb == 0:
        return a
    n = na + nb
    delta = mb - ma
    return n, ma + delta * nb / n, sa + sb + delta * delta * na * nb / n


def _run(draw: Callable[[np.random.Generator, int], np.ndarray], samples: int, seed: int,
         workers: int | None, chunk: int) -> McEstimate:
    if int(samples) != samples or samples < MIN_SAMPLES:
        raise ValueError(f"samples must be an integer >= {MIN_SAMPLES}, got {samples}")
    samples = int(samples)
    if int(seed) != seed or not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    seed = int(seed)
    workers = default_workers() if workers is None else int(workers)
    if workers < 1:
        raise ValueError("workers must be positive")
    children = np.random.SeedSequence(seed).spawn(workers)
    base, extra = divmod(samples, workers)
    shares = [base + (1 if w < extra else 0) for w in range(workers)]

    def job(w):
        rng = np.random.Generator(np.random.PCG64(children[w]))
        acc = (0, 0.0, 0.0)
        left = shares[w]
        while left > 0:
            size = min(chunk, left)
            acc = _merge(acc, _welford(draw(rng, size)))
            left -= size
        return acc

    if workers == 1:
        parts = [job(0)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, range(workers)))
    total = (0, 0.0, 0.0)
    for part in parts:
        total = _merge(total, part)
    count, mean, m2 = total
    std = math.sqrt(m2 / (count - 1)) / math.sqrt(count)
    return McEstimate(mean=mean, std_error=std, samples=count, seed=seed, workers=workers)


def _chunk_rows(floats_per_row: int) -> int:
    return max(1, min(100_000, CHUNK_FLOATS // max(1, floats_per_row)))


def _scale_arrays(model: RandomPolytopeModel, scales):
    """Per-point multipliers (plus, minus); minus is None unless the model is symmetric."""
    if scales is None:
        return None, None
    if model.tag.poisson or model.tag is Model.ZONOTOPE:
        raise ValueError(f"scales are not supported for {model.tag.name}")
    if isinstance(scales, SignedScaleVector):
        if model.tag is not Model.SYMMETRIC:
            raise ValueError("signed scales need the SYMMETRIC model")
        plus, minus = np.array(scales.plus), np.array(scales.minus)
    else:
        if not isinstance(scales, ScaleVector):
            scales = ScaleVector(tuple(scales))
        plus = np.array(scales.scales)
        minus = plus if model.tag is Model.SYMMETRIC else None
    if plus.size != model.n:
        raise ValueError(f"{plus.size} scales given for n={model.n} points")
    return plus, minus


def estimate_expected_volume(model: RandomPolytopeModel, scales=None, samples: int = 10**6, seed: int = 42,
                             workers: int | None = None) -> McEstimate:
    d = model.d
    if d > MAX_DIM:
        raise ValueError(f"Monte Carlo volumes are capped at d={MAX_DIM}")
    tag = model.tag
    plus, minus = _scale_arrays(model, scales)

    if tag.poisson:
        lam = model.rate
        symmetric = tag is Model.POISSON_SYMMETRIC
        rows = _chunk_rows(int(lam + 10 * math.sqrt(lam) + 10) * d * (2 if symmetric else 1))

        def draw(rng, size):
            counts = rng.poisson(lam, size)
            width = max(int(counts.max()), 1)
            pts = rng.standard_normal((size, width, d))
            if symmetric:
                # keep each cloud's reflections inside its valid rows
                pts = np.concatenate([pts, -pts], axis=1)
                order = np.concatenate([np.arange(width), np.arange(width) + width])
                valid = np.arange(width)[None, :] < counts[:, None]
                mask = np.concatenate([valid, valid], axis=1)
                idx = np.argsort(~mask, axis=1, kind="stable")
                pts = np.take_along_axis(pts[:, order], idx[:, :, None], axis=1)
                return batch_hull_volumes(pts, 2 * counts)
            return batch_hull_volumes(pts, counts)

        return _run(draw, samples, seed, workers, rows)

    n = model.n
    if tag is Model.ZONOTOPE:
        zonotope_combinations(n, d)
        rows = _chunk_rows(n * d + math.comb(n, d))

        def draw(rng, size):
            return batch_zonotope_volumes(rng.standard_normal((size, n, d)))

        return _run(draw, samples, seed, workers, rows)

    mode = {Model.GAUSSIAN: HullMode.PLAIN, Model.SYMMETRIC: HullMode.SYMMETRIC,
            Model.WITH_ZERO: HullMode.WITH_ZERO}[tag]
    rows = _chunk_rows(2 * n * d)

    def draw(rng, size):
        pts = rng.standard_normal((size, n, d))
        if plus is None:
            return batch_hull_volumes(_augment(pts, mode))
        if mode == HullMode.SYMMETRIC:
            both = np.concatenate([pts * plus[:, None], -pts * minus[:, None]], axis=1)
            return batch_hull_volumes(both)
        return batch_hull_volumes(_augment(pts * plus[:, None], mode))

    return _run(draw, samples, seed, workers, rows)


def estimate_multiplicity_event(n: int, k: int, eps: float, f: MomentFunction,
                                family: SampleFamily = SampleFamily.PLAIN, samples: int = 10**6,
                                seed: int = 42, workers: int | None = None) -> McEstimate:
    """Mean of eps^(1-k) f(max) 1{max - (k-th largest) <= eps}."""
    if int(n) != n or n < 1 or int(k) != k or not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    if not (eps > 0 and math.isfinite(eps)):
        raise ValueError("eps must be positive")
    if not isinstance(f, MomentFunction):
        raise TypeError("f must be a MomentFunction")
    n, k = int(n), int(k)
    scale = eps ** (1 - k)

    def draw(rng, size):
        xi = rng.standard_normal((size, n))
        if family is SampleFamily.ABSOLUTE:
            np.abs(xi, out=xi)
        top = np.partition(xi, (n - k, n - 1), axis=1)
        hit = (top[:, n - 1] - top[:, n - k]) <= eps
        if f.kind is Moment.ONE:
            val = np.ones(size)
        elif f.kind is Moment.IDENTITY:
            val = top[:, n - 1]
        else:
            val = (top[:, n - 1] <= f.threshold).astype(float)
        return scale * val * hit

    return _run(draw, samples, seed, workers, _chunk_rows(n))
