"""Special functions, certified quadrature, and reproducible random streams.

Everything stochastic in this package draws its randomness through
:class:`StreamKey`.  A key is the triple (master_seed, replicate_index,
substream_index); it is mixed through ``numpy.random.SeedSequence`` into a
Philox counter-based generator, so the stream behind a key is a pure function
of the triple.  Creating streams in a different order, on a different worker,
or interleaved with other streams never changes what any key yields.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy import special as sc
from scipy.integrate import quad

__all__ = [
    "StreamKey",
    "QuadratureSpec",
    "QuadratureError",
    "DEFAULT_QUADRATURE",
    "ln_gamma",
    "reg_gamma_upper",
    "std_normal_cdf",
    "std_normal_tail",
    "std_normal_quantile",
    "integrate",
    "std_normal_sample",
    "parallel_map",
]

_U64_MAX = 2**64 - 1


@dataclass(frozen=True)
class StreamKey:
    """Address of one reproducible random stream.

    Replicates of an experiment differ in ``replicate_index``; independent
    noise sources inside one replicate (coordinates, point indices, arrival
    clocks) differ in ``substream_index``.  Distinct triples give
    statistically independent Philox streams, identical triples always give
    the identical stream.
    """

    master_seed: int
    replicate_index: int = 0
    substream_index: int = 0

    def __post_init__(self):
        for name in ("master_seed", "replicate_index", "substream_index"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)):
                raise ValueError(f"{name} must be an integer, got {type(value).__name__}")
            if not 0 <= value <= _U64_MAX:
                raise ValueError(f"{name} must fit in an unsigned 64-bit integer, got {value}")

    def with_replicate(self, index) -> "StreamKey":
        return replace(self, replicate_index=int(index))

    def with_substream(self, index) -> "StreamKey":
        return replace(self, substream_index=int(index))

    def generator(self) -> np.random.Generator:
        """Fresh generator for this key; owned by the caller from here on."""
        seq = np.random.SeedSequence(
            entropy=self.master_seed,
            spawn_key=(self.replicate_index, self.substream_index),
        )
        return np.random.Generator(np.random.Philox(seq))


def std_normal_sample(key: StreamKey, count: int) -> np.ndarray:
    """`count` i.i.d. N(0,1) draws from the stream at `key`."""
    if count < 0 or int(count) != count:
        raise ValueError(f"count must be a nonnegative integer, got {count}")
    return key.generator().standard_normal(int(count))


def ln_gamma(x) -> float:
    """log Gamma(x) for x > 0."""
    if not x > 0:
        raise ValueError(f"ln_gamma requires x > 0, got {x}")
    return float(sc.gammaln(x))


def reg_gamma_upper(a, x) -> float:
    """Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a)."""
    if not a > 0:
        raise ValueError(f"reg_gamma_upper requires a > 0, got {a}")
    if not x >= 0:
        raise ValueError(f"reg_gamma_upper requires x >= 0, got {x}")
    return float(sc.gammaincc(a, x))


def std_normal_cdf(x) -> float:
    """Phi(x), the standard normal distribution function."""
    return float(sc.ndtr(x))


def std_normal_tail(x) -> float:
    """Phi-bar(x) = 1 - Phi(x), evaluated without cancellation."""
    return float(sc.ndtr(-x))


def std_normal_quantile(p) -> float:
    """Inverse of Phi on (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"std_normal_quantile requires p in (0, 1), got {p}")
    return float(sc.ndtri(p))


@dataclass(frozen=True)
class QuadratureSpec:
    """Accuracy request for :func:`integrate`."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 200

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")


DEFAULT_QUADRATURE = QuadratureSpec()


class QuadratureError(RuntimeError):
    """Raised when adaptive quadrature cannot certify the requested tolerance.

    Carries the last estimate and its error bound so callers can decide
    whether the partial answer is still useful.
    """

    def __init__(self, message, estimate, error_bound):
        super().__init__(f"{message.strip()} [estimate={estimate!r}, error_bound={error_bound!r}]")
        self.estimate = float(estimate)
        self.error_bound = float(error_bound)


def integrate(f, lo, hi, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Adaptive quadrature of ``f`` over (lo, hi); ``hi`` may be ``numpy.inf``.

    Returns an estimate certified within ``max(abs_tol, rel_tol * |value|)``
    or raises :class:`QuadratureError` with the last estimate attached.
    """
    if not lo < hi:
        raise ValueError(f"integration interval is empty: ({lo}, {hi})")
    out = quad(
        f,
        lo,
        hi,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        limit=spec.max_subdivisions,
        full_output=True,
    )
    value, error_bound = out[0], out[1]
    if len(out) > 3:  # QUADPACK appended a warning message
        raise QuadratureError(out[3], value, error_bound)
    return float(value)


def parallel_map(worker, count: int, threads: int = 1) -> list:
    """Apply ``worker(i)`` for i in range(count), optionally on a thread pool.

    Results come back in index order, so downstream reductions are
    deterministic for every thread count.
    """
    if threads <= 1 or count <= 1:
        return [worker(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, range(count)))
