"""Three ways to measure a grid, and why they agree topologically.

Run: python demos/01_gauges.py
"""
import numpy as np

from gaugespace import (Gauge, PointSet, ToleranceProfile, coordinate_metric, coordinate_tables, discrete,
                        generate_gauge, indiscrete, topologically_equivalent)
from gaugespace import spacefile as sf

bundle = sf.from_doc(sf.grid_plane(10))
tol = ToleranceProfile(0, (2.0, 1.0, 0.5))
print("10x10 grid, metrics:", list(bundle.metrics))
for a, b in [("euclidean", "taxicab"), ("taxicab", "chebyshev")]:
    v = topologically_equivalent(bundle.named_gauge(a), bundle.named_gauge(b), tol)
    print(f"  {a} ~ {b}: {v.equivalent}")

# The two extremes on the same points never agree: a discrete ball of radius
# 1 is a single point, while every indiscrete ball is everything.
v = topologically_equivalent(Gauge([discrete(bundle.space)]), Gauge([indiscrete(bundle.space)]), tol)
print("  discrete ~ indiscrete:", v.equivalent, "witness", v.witness[:4])

# Two coordinate pseudometrics generate a gauge; its closure adds their max,
# which is the chebyshev distance.
s = PointSet.from_coords(np.random.default_rng(0).random((8, 2)))
g = generate_gauge(coordinate_tables(s))
print("\ngauge generated by the two axes:", g.ids)
print("  top member equals chebyshev:",
      np.array_equal(g.members[-1].values, coordinate_metric(s, "chebyshev").values))
