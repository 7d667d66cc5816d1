"""Simulation of the Brown-Resnick process and its finite-dimensional laws.

The process is M(t) = max_k (X_k + B_k(t) - t/2) over the points {X_k} of a
Poisson process with intensity e^{-x} dx and independent standard Brownian
motions B_k.  Its one-dimensional margins are standard Gumbel and its
bivariate margins are Husler-Reiss with dependence parameter
lambda = sqrt(|t - s|) / 2.
"""

import math
from dataclasses import dataclass

import numpy as np

from .numerics import StreamKey, parallel_map, std_normal_cdf, std_normal_quantile
from .paths import SamplePath, TimeGrid

__all__ = [
    "BRTruncationSpec",
    "HRParams",
    "TruncationError",
    "gumbel_cdf",
    "gumbel_quantile",
    "sample_br",
    "sample_br_batch",
    "hr_lambda",
    "hr_bivariate_cdf",
    "extremal_coefficient",
]

_POINT_CHUNK = 64


@dataclass(frozen=True)
class BRTruncationSpec:
    """Error budget for truncating the Poisson point series."""

    epsilon: float = 1e-4
    max_points: int = 10_000

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.max_points < 1:
            raise ValueError("max_points must be at least 1")


@dataclass(frozen=True)
class HRParams:
    """Husler-Reiss dependence parameter; lam = 0 is complete dependence,
    lam = inf independence."""

    lam: float

    def __post_init__(self):
        if math.isnan(self.lam) or self.lam < 0:
            raise ValueError(f"lambda must be nonnegative (or inf), got {self.lam}")


class TruncationError(RuntimeError):
    """Point budget exhausted before the truncation rule certified the path."""

    def __init__(self, message, partial: SamplePath):
        super().__init__(message)
        self.partial = partial


def gumbel_cdf(x) -> float:
    """Standard Gumbel distribution function exp(-exp(-x))."""
    try:
        return math.exp(-math.exp(-x))
    except OverflowError:
        return 0.0


def gumbel_quantile(p) -> float:
    """Inverse of the standard Gumbel distribution function on (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"gumbel_quantile requires p in (0, 1), got {p}")
    return -math.log(-math.log(p))


def sample_br(grid: TimeGrid, spec: BRTruncationSpec, key: StreamKey) -> SamplePath:
    """One Brown-Resnick path on ``grid`` with truncation error budget ``spec.epsilon``.

    Poisson points are realised as X_k = -ln(G_k) with G_k the cumulative sums
    of unit-rate exponentials from the substream at ``key.substream_index``;
    the X_k are therefore strictly decreasing.  Brownian increments for all
    point paths come from substream ``key.substream_index + 1``, consumed in
    point order, so the whole path is a pure function of the key.

    Stopping rule: once the running pointwise maximum has minimum value m*
    over the grid, a later point at level x < X_k can alter some grid value
    only if its drifted path satisfies sup_{[0,1]} (B(t) - t/2) > m* - x.
    By the reflection principle P(sup_{[0,1]} B(t) > c) <= 2 (1 - Phi(c)), and
    the drift only lowers the supremum, so generation stops at the first k
    with X_k + c_eps < m*, where c_eps = Phi^{-1}(1 - epsilon/2).  Each
    discarded point then had probability at most epsilon of mattering, and
    the levels of subsequent discarded points fall off geometrically fast.
    """
    arrivals = key.with_substream(key.substream_index).generator()
    wiener = key.with_substream(key.substream_index + 1).generator()
    c_eps = std_normal_quantile(1.0 - spec.epsilon / 2.0)

    pts = grid.points
    drift = -pts / 2.0
    sq_steps = np.sqrt(np.diff(pts))

    best = None
    floor = -np.inf
    gamma = 0.0
    produced = 0
    while produced < spec.max_points:
        take = min(_POINT_CHUNK, spec.max_points - produced)
        expo = arrivals.standard_exponential(take)
        z = wiener.standard_normal((take, pts.size - 1))
        for i in range(take):
            gamma += expo[i]
            x = -math.log(gamma)
            if x + c_eps < floor:
                return SamplePath(grid, best)
            contribution = np.empty(pts.size)
            contribution[0] = 0.0
            np.cumsum(z[i] * sq_steps, out=contribution[1:])
            contribution += x + drift
            best = contribution if best is None else np.maximum(best, contribution)
            floor = best.min()
            produced += 1
    raise TruncationError(
        f"stopping rule did not fire within {spec.max_points} points",
        SamplePath(grid, best),
    )


def sample_br_batch(
    grid: TimeGrid,
    spec: BRTruncationSpec,
    key: StreamKey,
    replicates: int,
    threads: int = 1,
) -> np.ndarray:
    """Matrix of ``replicates`` independent Brown-Resnick paths, one per row.

    Replicate r uses ``key.with_replicate(r)``, so the output is byte-stable
    under any thread count.
    """
    if replicates < 1:
        raise ValueError("replicates must be at least 1")

    def one(r):
        return sample_br(grid, spec, key.with_replicate(r)).values

    rows = parallel_map(one, replicates, threads)
    return np.vstack(rows)


def hr_lambda(s, t) -> HRParams:
    """Dependence parameter of the Brown-Resnick pair (M(s), M(t)):
    lambda = sqrt(|t - s|) / 2."""
    for u in (s, t):
        if not 0.0 <= u <= 1.0:
            raise ValueError(f"times must lie in [0, 1], got {u}")
    return HRParams(math.sqrt(abs(t - s)) / 2.0)


def hr_bivariate_cdf(x, y, p: HRParams) -> float:
    """Husler-Reiss bivariate distribution function with Gumbel margins.

    F(x, y) = exp(-e^{-x} Phi(lam + (y-x)/(2 lam)) - e^{-y} Phi(lam + (x-y)/(2 lam)))
    with the complete-dependence (lam = 0) and independence (lam = inf) limits.
    """
    lam = p.lam
    if lam == 0.0:
        return gumbel_cdf(min(x, y))
    if math.isinf(lam):
        return gumbel_cdf(x) * gumbel_cdf(y)
    z = (y - x) / (2.0 * lam)
    return float(
        np.exp(
            -np.exp(-x) * std_normal_cdf(lam + z) - np.exp(-y) * std_normal_cdf(lam - z)
        )
    )


def extremal_coefficient(p: HRParams) -> float:
    """Effective number of independent components of a Husler-Reiss pair:
    theta = 2 Phi(lambda), clamped to [1, 2]."""
    if math.isinf(p.lam):
        return 2.0
    return float(min(2.0, max(1.0, 2.0 * std_normal_cdf(p.lam))))
