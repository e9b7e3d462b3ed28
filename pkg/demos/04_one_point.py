"""The one-point compactification of an integer line, window by window.

Collapsing everything outside a window K makes the far ends of the line
close to each other.  Inside the window nothing changes, and covering the
result costs at most one extra ball.

Run: python demos/04_one_point.py
"""
import numpy as np

from gaugespace import (ExhaustionChain, Gauge, PointSet, coordinate_metric, find_representative, greedy_net,
                        infinity_profile, one_point_gauge, restrict, validate_cauchy_point)

s = PointSet(range(-50, 51), np.arange(-50, 51.0))
g = Gauge([coordinate_metric(s, id="d")])
chain = ExhaustionChain(s, [range(-10 * j, 10 * j + 1) for j in range(1, 5)])
op = one_point_gauge(g, chain)

for j, K in enumerate(chain.subsets):
    dK = op[f"d|K{j + 1}"]
    sizes = [(len(greedy_net(dK, e)), len(greedy_net(restrict(g["d"], sorted(K)), e))) for e in (8.0, 2.0)]
    print(f"{dK.id}: d(-50, 50) = {dK(-50, 50):.0f}, d(0, 50) = {dK(0, 50):.0f}, covers (windowed, window) {sizes}")

inf = infinity_profile(g, chain, op)
print("point at infinity valid:", validate_cauchy_point(inf, 0).valid,
      "| represented by the outermost sample point", find_representative(inf, 0))
