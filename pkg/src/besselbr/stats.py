"""Empirical-distribution machinery for the desk-scale convergence checks.

The limit theorems verified here are one of two shapes: a fixed-time maximum,
affinely normalised, converges to the standard Gumbel law; and the pair of
rescaled maxima at two times converges to the Husler-Reiss law.  Both shapes
reduce to Kolmogorov-Smirnov style distances between empirical and model
distribution functions.

Sampling strategy for the Gumbel sweeps: at a fixed time the base marginals
have known one-dimensional laws, so the maximum of n of them is drawn in one
step through the inverse distribution function of the maximum whenever that
inverse is available (chi-square via the regularized gamma inverse, the m = 2
product sum via the Laplace quantile, Brownian values via the normal
quantile).  The same uniforms are reused across the sweep's sample counts, so
consecutive sweep entries are coupled and the reported decrease in KS
distance reflects the shrinking distributional bias rather than independent
sampling noise.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sc

from .brown_resnick import (
    BRTruncationSpec,
    gumbel_cdf,
    hr_bivariate_cdf,
    hr_lambda,
    sample_br,
)
from .numerics import StreamKey, parallel_map
from .paths import TimeGrid, _check_dimension
from .rescale import (
    bessel_constants,
    local_bessel_batch,
    local_scalar_batch,
    scalar_constants,
)

__all__ = [
    "EmpiricalSample",
    "SweepRecord",
    "SweepReport",
    "ks_statistic",
    "two_sample_ks",
    "bivariate_cdf_diff",
    "marginal_gumbel_sweep",
    "fdd_check",
    "DEFAULT_FDD_LEVELS",
]

SWEEP_CHUNK = 256  # replicates per canonical chunk; fixed so reports are thread-count independent
FDD_CHUNK = 100

DEFAULT_FDD_LEVELS = (-1.0, 0.0, 1.0)

_PROCESSES = ("bessel", "scalar", "bm")


class EmpiricalSample:
    """A batch of real observations, optionally pre-sorted."""

    __slots__ = ("values", "is_sorted")

    def __init__(self, values, is_sorted: bool = False):
        vals = np.asarray(values, dtype=float).ravel()
        if vals.size and not np.all(np.isfinite(vals)):
            raise ValueError("sample values must be finite")
        if is_sorted and vals.size > 1 and np.any(np.diff(vals) < 0):
            raise ValueError("sample flagged as sorted is not sorted")
        self.values = vals
        self.is_sorted = bool(is_sorted)

    def __len__(self):
        return self.values.size

    @property
    def sorted_values(self) -> np.ndarray:
        return self.values if self.is_sorted else np.sort(self.values)


def _eval_cdf(cdf, xs: np.ndarray) -> np.ndarray:
    if xs.size > 1:  # scalar-only callables raise on arrays; fall through
        try:
            vals = np.asarray(cdf(xs), dtype=float)
            if vals.shape == xs.shape:
                return vals
        except (TypeError, ValueError):
            pass
    return np.fromiter((float(cdf(x)) for x in xs), dtype=float, count=xs.size)


def ks_statistic(sample: EmpiricalSample, cdf) -> float:
    """sup-norm distance between the empirical CDF and ``cdf``.

    Both one-sided gaps at every jump point are taken, so the value is the
    exact Kolmogorov-Smirnov statistic.
    """
    xs = sample.sorted_values
    n = xs.size
    if n == 0:
        raise ValueError("ks_statistic needs a nonempty sample")
    f = _eval_cdf(cdf, xs)
    upper = np.max(np.arange(1, n + 1) / n - f)
    lower = np.max(f - np.arange(0, n) / n)
    return float(max(upper, lower))


def two_sample_ks(a: EmpiricalSample, b: EmpiricalSample) -> float:
    """sup-norm distance between two empirical CDFs."""
    xs, ys = a.sorted_values, b.sorted_values
    if xs.size == 0 or ys.size == 0:
        raise ValueError("two_sample_ks needs nonempty samples")
    support = np.concatenate([xs, ys])
    fa = np.searchsorted(xs, support, side="right") / xs.size
    fb = np.searchsorted(ys, support, side="right") / ys.size
    return float(np.max(np.abs(fa - fb)))


def bivariate_cdf_diff(pairs, model, grid) -> float:
    """max over ``grid`` of |empirical joint CDF of ``pairs`` - model(x, y)|."""
    pts = np.asarray(pairs, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] == 0:
        raise ValueError("pairs must be a nonempty (N, 2) array")
    grid = list(grid)
    if not grid:
        raise ValueError("evaluation grid must be nonempty")
    x, y = pts[:, 0], pts[:, 1]
    worst = 0.0
    for gx, gy in grid:
        empirical = float(np.mean((x <= gx) & (y <= gy)))
        worst = max(worst, abs(empirical - float(model(gx, gy))))
    return worst


@dataclass(frozen=True)
class SweepRecord:
    n: int
    replicates: int
    statistic: str
    value: float


@dataclass(frozen=True)
class SweepReport:
    """Per-sample-count statistics of one convergence sweep."""

    records: tuple

    def __post_init__(self):
        ns = [r.n for r in self.records]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("sweep records must have strictly increasing n")

    @property
    def values(self) -> list[float]:
        return [r.value for r in self.records]

    @property
    def final_value(self) -> float:
        return self.records[-1].value

    @property
    def decreasing(self) -> bool:
        v = self.values
        return all(b < a for a, b in zip(v, v[1:]))


def _normal_maxima_constants(n):
    # classical Gumbel norming for maxima of n standard normals
    s = math.sqrt(2.0 * math.log(n))
    b = s - (math.log(math.log(n)) + math.log(4.0 * math.pi)) / (2.0 * s)
    return 1.0 / s, b


def _laplace_upper_quantile(q: np.ndarray) -> np.ndarray:
    # x with P(Laplace > x) = q
    return np.where(q <= 0.5, -np.log(2.0 * q), np.log(2.0 * (1.0 - q)))


def _coupled_normalized_max(process, m, t, n, u):
    # maximum of n i.i.d. base marginals drawn through the exact inverse CDF
    # of the maximum: q = P(max survival) = 1 - U^{1/n}, evaluated stably.
    q = -np.expm1(np.log(u) / n)
    if process == "bessel":
        mx = 2.0 * sc.gammainccinv(0.5 * m, q)
        consts = bessel_constants(n, m)
    elif process == "scalar":
        mx = _laplace_upper_quantile(q)
        consts = scalar_constants(n, m)
    else:  # bm
        mx = -sc.ndtri(q)
        a, b = _normal_maxima_constants(n)
        return (math.sqrt(t) * mx - b * math.sqrt(t)) / (a * math.sqrt(t))
    return (t * mx - consts.b * t) / (consts.a * t)


def _raw_normalized_max(process, m, t, n, count, rng):
    # fallback for laws without a usable quantile: draw the n base values
    if process != "scalar":
        raise ValueError(f"no raw sampler needed for process {process!r}")
    draws = rng.standard_normal((count, n)) * np.sqrt(rng.chisquare(m, (count, n)))
    consts = scalar_constants(n, m)
    return (t * draws.max(axis=1) - consts.b * t) / (consts.a * t)


def marginal_gumbel_sweep(
    process: str,
    m: int,
    t: float,
    ns,
    replicates: int,
    key: StreamKey,
    *,
    threads: int = 1,
) -> SweepReport:
    """KS distance to the Gumbel law of normalised maxima, for each n in ``ns``.

    ``process`` selects the base marginal: "bessel" (chi-square(m) scaled by
    t), "scalar" (the m-term product sum scaled by t) or "bm" (N(0, t) with
    the classical normal norming constants, as a sanity baseline).  Maxima
    are sampled directly from the known one-dimensional laws; no paths are
    simulated.  Fixed key, fixed output, for every thread count.
    """
    if process not in _PROCESSES:
        raise ValueError(f"process must be one of {_PROCESSES}, got {process!r}")
    _check_dimension(m)
    if not t > 0:
        raise ValueError(f"sweep time t must be positive, got {t}")
    ns = [int(n) for n in ns]
    if not ns or any(b <= a for a, b in zip(ns, ns[1:])) or ns[0] < 2:
        raise ValueError("ns must be strictly increasing sample counts >= 2")
    if replicates < 1:
        raise ValueError("replicates must be positive")

    coupled = process in ("bessel", "bm") or (process == "scalar" and m == 2)
    n_chunks = -(-replicates // SWEEP_CHUNK)

    def worker(c):
        lo = c * SWEEP_CHUNK
        count = min(replicates, lo + SWEEP_CHUNK) - lo
        block = np.empty((len(ns), count))
        if coupled:
            u = key.with_replicate(c).generator().random(count)
            for j, n in enumerate(ns):
                block[j] = _coupled_normalized_max(process, m, t, n, u)
        else:
            for j, n in enumerate(ns):
                rng = key.with_replicate(c).with_substream(j + 1).generator()
                block[j] = _raw_normalized_max(process, m, t, n, count, rng)
        return block

    samples = np.concatenate(parallel_map(worker, n_chunks, threads), axis=1)
    records = tuple(
        SweepRecord(
            n=n,
            replicates=replicates,
            statistic="ks_gumbel",
            value=ks_statistic(EmpiricalSample(samples[j]), gumbel_cdf),
        )
        for j, n in enumerate(ns)
    )
    return SweepReport(records)


def _local_pair_maxima(process, m, s, t, n, key, replicates, threads):
    ts = np.array(sorted((s, t)))
    batch = local_bessel_batch if process == "bessel" else local_scalar_batch
    n_chunks = -(-replicates // FDD_CHUNK)

    def worker(c):
        lo = c * FDD_CHUNK
        count = min(replicates, lo + FDD_CHUNK) - lo
        rows = batch(ts, n, m, key.with_replicate(c), count * n)
        return rows.reshape(count, n, 2).max(axis=1)

    pairs = np.concatenate(parallel_map(worker, n_chunks, threads), axis=0)
    if s > t:
        pairs = pairs[:, ::-1]
    return pairs


def _br_pair_sample(s, t, key, replicates, br_spec, threads):
    times = sorted({0.0, s, t, 1.0})
    grid = TimeGrid(times)
    i_s, i_t = grid.index_of(s), grid.index_of(t)

    def worker(c):
        lo = c * FDD_CHUNK
        count = min(replicates, lo + FDD_CHUNK) - lo
        out = np.empty((count, 2))
        for i in range(count):
            values = sample_br(grid, br_spec, key.with_replicate(lo + i)).values
            out[i, 0] = values[i_s]
            out[i, 1] = values[i_t]
        return out

    n_chunks = -(-replicates // FDD_CHUNK)
    return np.concatenate(parallel_map(worker, n_chunks, threads), axis=0)


def fdd_check(
    process: str,
    m: int,
    times,
    n,
    replicates: int,
    key: StreamKey,
    *,
    levels=DEFAULT_FDD_LEVELS,
    br_spec: BRTruncationSpec | None = None,
    threads: int = 1,
) -> float:
    """Two-time finite-dimensional check against the Husler-Reiss law.

    Simulates ``replicates`` copies of (max over n rescaled processes at s,
    same at t) and returns the max over the levels grid of the absolute
    difference between the empirical joint CDF and the Husler-Reiss CDF with
    parameter sqrt(|t-s|)/2.  ``process`` may also be "br", in which case the
    pair comes from the limit process itself (``n`` is ignored) and the check
    exercises the simulator rather than a prelimit family.
    """
    s, t = times
    if s == t:
        raise ValueError("fdd_check needs two distinct times")
    for u in (s, t):
        if not 0.0 <= u <= 1.0:
            raise ValueError(f"times must lie in [0, 1], got {u}")
    if replicates < 1:
        raise ValueError("replicates must be positive")

    if process == "br":
        pairs = _br_pair_sample(s, t, key, replicates, br_spec or BRTruncationSpec(), threads)
    elif process in ("bessel", "scalar"):
        _check_dimension(m)
        if not n >= 2:
            raise ValueError(f"sample count n must be at least 2, got {n}")
        pairs = _local_pair_maxima(process, m, s, t, int(n), key, replicates, threads)
    else:
        raise ValueError(f"process must be bessel, scalar or br, got {process!r}")

    params = hr_lambda(s, t)
    grid = [(x, y) for x in levels for y in levels]
    return bivariate_cdf_diff(pairs, lambda x, y: hr_bivariate_cdf(x, y, params), grid)
