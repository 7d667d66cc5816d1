"""Norming constants, locally rescaled processes, and pointwise-maximum aggregation.

The running maximum of n independent squared Bessel (chi-square) or Brownian
scalar-product processes converges, after an affine space normalisation and a
shrinking time window around t = 1, to the Brown-Resnick process.  This
module owns the normalising constants of those limit theorems, the samplers
for the rescaled processes, and the pointwise maximum that ties them together.

Every centering constant b here is calibrated so that

    n * P(base marginal at time 1 > a*s + b)  ->  exp(-s)

which is the Poisson intensity required by the limit.  For dimension m = 2
the identity is exact for every n, not just asymptotically, for both process
families; the test suite pins this down to machine precision.
"""

import math
from dataclasses import dataclass

import numpy as np

from .numerics import StreamKey, ln_gamma
from .paths import SamplePath, TimeGrid, _bm_at, _check_dimension

__all__ = [
    "NormingConstants",
    "bessel_constants",
    "scalar_constants",
    "generic_constants",
    "sample_local_bessel",
    "sample_local_scalar",
    "max_process",
    "local_bessel_times",
    "local_scalar_times",
    "local_bessel_batch",
    "local_bessel_split_batch",
    "local_scalar_batch",
]

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class NormingConstants:
    """Affine normalisation (a, b) for the maximum of n samples.

    ``kind`` records which family produced the pair, together with the source
    parameters (``m`` for the two process families, the tail parameters
    (K, c, beta) for the generic Weibull-type family), so the same constants
    can be re-derived at a different sample count via :meth:`at`.
    """

    a: float
    b: float
    kind: str
    n: float
    m: int | None = None
    K: float | None = None
    c: float | None = None
    beta: float | None = None

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("scale constant a must be positive")
        if self.kind not in ("bessel", "scalar", "generic"):
            raise ValueError(f"unknown norming kind {self.kind!r}")

    def at(self, n) -> "NormingConstants":
        """Constants of the same family evaluated at another sample count."""
        if self.kind == "bessel":
            return bessel_constants(n, self.m)
        if self.kind == "scalar":
            return scalar_constants(n, self.m)
        return generic_constants(self.K, self.c, self.beta, n)


def _check_count(n):
    # n may be any real >= 2 (tests exercise non-integer counts like e^2);
    # below 2 the iterated logarithm is undefined or complex.
    if not n >= 2:
        raise ValueError(f"sample count n must be at least 2, got {n}")
    return float(n)


def bessel_constants(n, m: int) -> NormingConstants:
    """Norming constants for maxima of chi-square(m) marginals.

    a = 2 and b = 2 ln n + (m - 2) ln ln n - 2 ln Gamma(m/2), matching the
    tail P(chi2_m > x) ~ x^{m/2-1} e^{-x/2} / (2^{m/2-1} Gamma(m/2)).
    For m = 2 this gives n * P(chi2_2 > 2s + b) = exp(-s) exactly.
    """
    n = _check_count(n)
    _check_dimension(m)
    b = 2.0 * math.log(n) + (m - 2.0) * math.log(math.log(n)) - 2.0 * ln_gamma(m / 2.0)
    return NormingConstants(a=2.0, b=b, kind="bessel", n=n, m=int(m))


def scalar_constants(n, m: int) -> NormingConstants:
    """Norming constants for maxima of m-term sums of products of N(0,1) pairs.

    a = 1 and b = ln n + (m/2 - 1) ln ln n - (m/2) ln 2 - ln Gamma(m/2),
    matching the signed-sum tail
    P(sum X_j Y_j > x) ~ x^{m/2-1} e^{-x} / (2^{m/2} Gamma(m/2)).
    For m = 2 the sum is standard Laplace and
    n * P(sum > s + b) = exp(-s) holds exactly.
    """
    n = _check_count(n)
    _check_dimension(m)
    b = (
        math.log(n)
        + (m / 2.0 - 1.0) * math.log(math.log(n))
        - (m / 2.0) * _LN2
        - ln_gamma(m / 2.0)
    )
    return NormingConstants(a=1.0, b=b, kind="scalar", n=n, m=int(m))


def generic_constants(K, c, beta, n) -> NormingConstants:
    """Norming constants for a tail of the form K u^beta e^{-c u}.

    a = 1/c and b = (ln n + beta ln(ln n / c) + ln K) / c.
    """
    if not K > 0:
        raise ValueError(f"tail coefficient K must be positive, got {K}")
    if not c > 0:
        raise ValueError(f"tail rate c must be positive, got {c}")
    n = _check_count(n)
    b = (math.log(n) + beta * math.log(math.log(n) / c) + math.log(K)) / c
    return NormingConstants(
        a=1.0 / c, b=b, kind="generic", n=n, K=float(K), c=float(c), beta=float(beta)
    )


def local_bessel_times(ts, n, m: int) -> np.ndarray:
    """Physical evaluation times 1 + t/b for the rescaled chi-square process."""
    b = bessel_constants(n, m).b
    return 1.0 + np.asarray(ts, dtype=float) / b


def local_scalar_times(ts, n, m: int) -> np.ndarray:
    """Physical evaluation times 1 + t/(2b) for the rescaled scalar-product process."""
    b = scalar_constants(n, m).b
    return 1.0 + np.asarray(ts, dtype=float) / (2.0 * b)


def sample_local_bessel(grid: TimeGrid, n, m: int, key: StreamKey) -> SamplePath:
    """One rescaled squared Bessel path on the local clock.

    The base process is simulated with exact increments at the physical times
    1 + t/b (including the initial segment up to time 1) and then centred and
    scaled:  value(t) = (xi(1 + t/b) - b (1 + t/b)) / 2.
    """
    consts = bessel_constants(n, m)
    phys = 1.0 + grid.points / consts.b
    total = np.zeros(len(grid))
    base = key.substream_index
    for j in range(m):
        rng = key.with_substream(base + j).generator()
        total += _bm_at(phys, rng) ** 2
    return SamplePath(grid, (total - consts.b * phys) / 2.0)


def sample_local_scalar(grid: TimeGrid, n, m: int, key: StreamKey) -> SamplePath:
    """One rescaled scalar-product path on the local clock.

    value(t) = gamma(1 + t/(2b)) - b (1 + t/(2b)) with b the scalar-family
    centering constant.
    """
    consts = scalar_constants(n, m)
    phys = 1.0 + grid.points / (2.0 * consts.b)
    total = np.zeros(len(grid))
    base = key.substream_index
    for j in range(m):
        b1 = _bm_at(phys, key.with_substream(base + j).generator())
        b2 = _bm_at(phys, key.with_substream(base + m + j).generator())
        total += b1 * b2
    return SamplePath(grid, total - consts.b * phys)


def max_process(paths) -> SamplePath:
    """Pointwise maximum of sample paths living on one common grid."""
    paths = list(paths)
    if not paths:
        raise ValueError("max_process needs at least one path")
    grid = paths[0].grid
    for p in paths[1:]:
        if not np.array_equal(p.grid.points, grid.points):
            raise ValueError("all paths must share one grid")
    return SamplePath(grid, np.maximum.reduce([p.values for p in paths]))


def _checked_times(ts):
    ts = np.asarray(ts, dtype=float)
    if ts.ndim != 1 or ts.size == 0:
        raise ValueError("ts must be a nonempty 1-d array of times")
    if np.any(ts < 0) or not np.all(np.diff(ts) > 0):
        raise ValueError("ts must be nonnegative and strictly increasing")
    return ts


def local_bessel_batch(ts, n, m: int, key: StreamKey, count: int) -> np.ndarray:
    """``count`` i.i.d. copies of the rescaled chi-square process at clock times ``ts``.

    Returns shape (count, len(ts)).  All rows come from the single stream at
    ``key``; use this for bulk marginal studies where per-row keys are not
    needed.
    """
    consts = bessel_constants(n, m)
    ts = _checked_times(ts)
    phys = 1.0 + ts / consts.b
    steps = np.diff(phys, prepend=0.0)
    rng = key.generator()
    z = rng.standard_normal((count, m, phys.size))
    bm = np.cumsum(z * np.sqrt(steps), axis=2)
    xi = np.einsum("ijk,ijk->ik", bm, bm)
    return (xi - consts.b * phys) / 2.0


def local_bessel_split_batch(ts, n, m: int, key: StreamKey, count: int) -> np.ndarray:
    """Same law as :func:`local_bessel_batch`, built from independent pieces.

    Writing each Brownian coordinate at time 1 + t/b as B(1) + B*(t)/sqrt(b)
    with B* a fresh Brownian motion in the local clock, the rescaled process
    decomposes exactly into

        X + R(t) - t/2 + delta(t),
        X     = (sum_j B_j(1)^2 - b) / 2,
        R(t)  = sum_j B_j(1) B*_j(t) / sqrt(b),
        delta = sum_j B*_j(t)^2 / (2 b).

    This sampler draws the pieces independently; it must agree in law with
    the direct sampler, which the test suite checks by two-sample statistics.
    """
    consts = bessel_constants(n, m)
    ts = _checked_times(ts)
    rng = key.generator()
    b1 = rng.standard_normal((count, m))
    z = rng.standard_normal((count, m, ts.size))
    bstar = np.cumsum(z * np.sqrt(np.diff(ts, prepend=0.0)), axis=2)
    x = (np.einsum("ij,ij->i", b1, b1) - consts.b) / 2.0
    r = np.einsum("ij,ijk->ik", b1, bstar) / math.sqrt(consts.b)
    delta = np.einsum("ijk,ijk->ik", bstar, bstar) / (2.0 * consts.b)
    return x[:, None] + r - ts / 2.0 + delta


def local_scalar_batch(ts, n, m: int, key: StreamKey, count: int) -> np.ndarray:
    """``count`` i.i.d. copies of the rescaled scalar-product process at ``ts``."""
    consts = scalar_constants(n, m)
    ts = _checked_times(ts)
    phys = 1.0 + ts / (2.0 * consts.b)
    steps = np.diff(phys, prepend=0.0)
    rng = key.generator()
    z = rng.standard_normal((count, m, phys.size))
    z_tilde = rng.standard_normal((count, m, phys.size))
    bm = np.cumsum(z * np.sqrt(steps), axis=2)
    bm_tilde = np.cumsum(z_tilde * np.sqrt(steps), axis=2)
    gamma = np.einsum("ijk,ijk->ik", bm, bm_tilde)
    return gamma - consts.b * phys
