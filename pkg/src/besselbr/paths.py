"""Exact-increment simulation of Brownian paths and the processes built from them.

All samplers place exact Gaussian increments between consecutive grid times,
so the joint law at the grid points carries no discretisation bias; the
squared Bessel and scalar-product processes are assembled directly from their
defining sums of Brownian coordinates.
"""

import numpy as np

from .numerics import StreamKey

__all__ = [
    "TimeGrid",
    "SamplePath",
    "make_dyadic_grid",
    "sample_bm",
    "sample_squared_bessel",
    "sample_scalar_product",
]

MAX_DYADIC_EXPONENT = 24


class TimeGrid:
    """Strictly increasing evaluation times spanning [0, 1]."""

    __slots__ = ("points",)

    def __init__(self, points):
        pts = np.array(points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("a time grid needs at least two points")
        if pts[0] != 0.0:
            raise ValueError("time grids start at 0")
        if pts[-1] != 1.0:
            raise ValueError("time grids end at 1")
        if not np.all(np.diff(pts) > 0.0):
            raise ValueError("grid points must be strictly increasing")
        pts.flags.writeable = False
        self.points = pts

    def __len__(self):
        return self.points.size

    def __eq__(self, other):
        return isinstance(other, TimeGrid) and np.array_equal(self.points, other.points)

    def __repr__(self):
        return f"TimeGrid({self.points.size} points on [0, 1])"

    def index_of(self, t) -> int:
        """Position of time ``t``; raises if ``t`` is not exactly a grid point."""
        idx = int(np.searchsorted(self.points, t))
        if idx == self.points.size or self.points[idx] != t:
            raise ValueError(f"{t} is not a grid point")
        return idx


class SamplePath:
    """One real value per point of a :class:`TimeGrid`."""

    __slots__ = ("grid", "values")

    def __init__(self, grid: TimeGrid, values):
        vals = np.array(values, dtype=float)
        if vals.shape != grid.points.shape:
            raise ValueError("path length must match its grid")
        if not np.all(np.isfinite(vals)):
            raise ValueError("path values must be finite")
        vals.flags.writeable = False
        self.grid = grid
        self.values = vals

    def value_at(self, t) -> float:
        return float(self.values[self.grid.index_of(t)])

    def __repr__(self):
        return f"SamplePath({self.grid!r})"


def make_dyadic_grid(k: int) -> TimeGrid:
    """Uniform grid of 2**k + 1 points on [0, 1]."""
    if k < 0:
        raise ValueError("dyadic exponent must be nonnegative")
    if k > MAX_DYADIC_EXPONENT:
        raise ValueError(
            f"dyadic exponent {k} exceeds the supported maximum {MAX_DYADIC_EXPONENT}"
        )
    return TimeGrid(np.linspace(0.0, 1.0, 2**k + 1))


def _bm_at(times: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Brownian values at strictly increasing times, started from B(0) = 0.

    ``times`` need not begin at 0; the first increment covers (0, times[0]].
    """
    steps = np.diff(times, prepend=0.0)
    return np.cumsum(rng.standard_normal(times.size) * np.sqrt(steps))


def sample_bm(grid: TimeGrid, key: StreamKey) -> SamplePath:
    """Standard Brownian motion observed on ``grid``.

    The increment over each grid interval is an exact N(0, dt) draw, so the
    joint distribution at the grid points is the true Brownian one.
    """
    rng = key.generator()
    pts = grid.points
    values = np.empty(pts.size)
    values[0] = 0.0
    np.cumsum(rng.standard_normal(pts.size - 1) * np.sqrt(np.diff(pts)), out=values[1:])
    return SamplePath(grid, values)


def _check_dimension(m):
    if m < 1 or int(m) != m:
        raise ValueError(f"dimension m must be a positive integer, got {m}")


def sample_squared_bessel(grid: TimeGrid, m: int, key: StreamKey) -> SamplePath:
    """Sum of squares of ``m`` independent Brownian coordinates on ``grid``.

    Coordinate j draws from substream ``key.substream_index + j``, so the
    whole path is reproducible from (master_seed, replicate_index).
    The value at time t is t * chi-square(m) in distribution.
    """
    _check_dimension(m)
    total = np.zeros(len(grid))
    for j in range(m):
        total += sample_bm(grid, key.with_substream(key.substream_index + j)).values ** 2
    return SamplePath(grid, total)


def sample_scalar_product(grid: TimeGrid, m: int, key: StreamKey) -> SamplePath:
    """Coordinatewise scalar product of two independent m-dimensional Brownian motions.

    Coordinate j uses substream ``key.substream_index + j`` for the first
    motion and ``key.substream_index + m + j`` for the second.
    """
    _check_dimension(m)
    base = key.substream_index
    total = np.zeros(len(grid))
    for j in range(m):
        b = sample_bm(grid, key.with_substream(base + j)).values
        b_tilde = sample_bm(grid, key.with_substream(base + m + j)).values
        total += b * b_tilde
    return SamplePath(grid, total)
