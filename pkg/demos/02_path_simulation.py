#!/usr/bin/env python3
"""Exact-increment simulation of the three base processes.

Brownian motion is sampled with exact N(0, dt) increments on the grid, the
squared Bessel process of dimension m is the sum of squares of m independent
coordinates, and the scalar-product process pairs two independent
m-dimensional motions coordinatewise.  Everything is addressed by a
StreamKey, so every path shown here can be regenerated bit-for-bit.
"""

import numpy as np

from besselbr import (
    StreamKey,
    make_dyadic_grid,
    max_process,
    sample_bm,
    sample_scalar_product,
    sample_squared_bessel,
)

grid = make_dyadic_grid(6)
key = StreamKey(20260810)

print(f"grid: {len(grid)} points, spacing {grid.points[1] - grid.points[0]}")

bm = sample_bm(grid, key)
bessel = sample_squared_bessel(grid, 3, key.with_replicate(1))
scalar = sample_scalar_product(grid, 3, key.with_replicate(2))

print()
print("one replicate of each process at t in {0, 0.25, 0.5, 0.75, 1}:")
for t in (0.0, 0.25, 0.5, 0.75, 1.0):
    print(
        f"  t={t:4}: bm {bm.value_at(t):+8.4f}   squared-bessel {bessel.value_at(t):8.4f}"
        f"   scalar-product {scalar.value_at(t):+8.4f}"
    )

again = sample_squared_bessel(grid, 3, key.with_replicate(1))
print()
print("reproducibility: same key gives identical bytes:",
      again.values.tobytes() == bessel.values.tobytes())

print()
print("Monte Carlo sanity at t = 1 (5000 replicates each):")
reps = 5000
terminal_bessel = np.array(
    [sample_squared_bessel(grid, 3, key.with_replicate(r)).values[-1] for r in range(reps)]
)
terminal_scalar = np.array(
    [sample_scalar_product(grid, 2, key.with_replicate(r)).values[-1] for r in range(reps)]
)
print(f"  squared-bessel m=3: mean {terminal_bessel.mean():.3f} (chi2_3 mean 3),"
      f" var {terminal_bessel.var():.3f} (chi2_3 var 6)")
print(f"  scalar-product m=2: mean {terminal_scalar.mean():+.4f} (0),"
      f" var {terminal_scalar.var():.3f} (2)")

print()
print("pointwise maximum of 5 Brownian paths never goes below any of them:")
paths = [sample_bm(grid, key.with_replicate(100 + r)) for r in range(5)]
envelope = max_process(paths)
print("  min over grid of (envelope - path):",
      min(float(np.min(envelope.values - p.values)) for p in paths))

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 3, figsize=(12, 3.2), sharex=True)
    for ax, path, title in zip(
        axes, (bm, bessel, scalar), ("Brownian motion", "squared Bessel (m=3)", "scalar product (m=3)")
    ):
        ax.plot(path.grid.points, path.values, lw=1.2)
        ax.set_title(title)
        ax.set_xlabel("t")
    fig.tight_layout()
    fig.savefig("paths_demo.png", dpi=120)
    print()
    print("wrote paths_demo.png")
except ImportError:
    pass
