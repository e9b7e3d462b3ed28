"""Wrap (0, 1) around a circle and ask where the end t -> 1 goes.

The interval is sampled at 0.001 and mapped to angle 2 pi t.  Its Stone-Čech
gauge is built from oscillating functions, bumps, and the clamped distances
to each circle point pulled back along the map.  The tail {t > z} becomes an
evaluation datum, bisection turns it into a point, and the extended map
sends that point next to (1, 0).

Run: python demos/05_stone_cech.py
"""
import numpy as np

from gaugespace import (FunctionDict, Gauge, MapTable, PointSet, TailChain, cauchy_from_evaluation,
                        coordinate_metric, extend_map, extension_entries, refine_datum, stone_cech_gauge,
                        tail_datum, truncate)

k = np.arange(1, 1000)
t = k / 1000
X = PointSet(k.tolist(), t.reshape(-1, 1), 0.001)
ang = 2 * np.pi * np.arange(1000) / 1000
Y = PointSet(range(1000), np.c_[np.cos(ang), np.sin(ang)])
chord = truncate(coordinate_metric(Y), 1.0, id="chord")
gY = Gauge([chord])
wrap = MapTable(X, Y, {int(i): int(i) for i in k})

entries = {f"osc{j}": (1 + np.sin(j / (1 - t))) / 2 for j in range(1, 9)}
entries.update(extension_entries(wrap, gY))
fd = FunctionDict(X, entries)

tails = TailChain(X, [[int(i) for i in k if i / 1000 > z] for z in (0.5, 0.9, 0.99, 0.997)])
J = tail_datum(tails, fd)
print("osc1 on the tail ranges over", J["osc1"], "- the oscillation never settles")
R = refine_datum(J, fd)
print("after bisection osc1 is pinned to", R["osc1"])
xi = cauchy_from_evaluation(R.midpoints(), stone_cech_gauge(fd))
y = extend_map(wrap, gY, xi)
print(f"extended map sends the tail point to circle point {y}, {chord(y, 0):.4f} from (1, 0)")
