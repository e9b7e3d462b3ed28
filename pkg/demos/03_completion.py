"""Punch holes in a line and fill them back in with distance profiles.

A deleted point survives as its profile z -> d(y, z) on what remains.  That
profile is a Cauchy point once we allow locatedness slack equal to the gap
it left.  Completing with it puts the point back.

Run: python demos/03_completion.py
"""
import numpy as np

from gaugespace import (Gauge, PointSet, complete_space, coordinate_metric, deleted_point_profile,
                        find_representative, hat_distance, validate_cauchy_point)

line = PointSet(range(11), np.arange(11.0))
amb = Gauge([coordinate_metric(line, id="abs")])
sub = amb.restricted([p for p in line.ids if p not in (3, 7)])
holes = [deleted_point_profile(amb, y, sub) for y in (3, 7)]

for xi in holes:
    print(f"hole {xi.label}: valid at slack 0? {validate_cauchy_point(xi, 0).valid}; "
          f"at slack 1? {validate_cauchy_point(xi, 1).valid}; nearest point {find_representative(xi, 1)}")
print("distance between the holes:", hat_distance("abs", *holes))

done = complete_space(sub, holes, slack=1)
order = [done.embedding[p] for p in line.ids]
idx = done.space.indices(order)
print("completed points:", len(done.space),
      "| table restored:", np.array_equal(done.gauge["abs"].values[np.ix_(idx, idx)], amb["abs"].values))

# In the plane the shortcut through a remaining point is longer than the
# straight line, so two nearby holes come back farther apart than they were.
rng = np.random.default_rng(1)
cloud = PointSet.from_coords(rng.random((12, 2)))
amb = Gauge([coordinate_metric(cloud, id="e")])
gone = cloud.ids[:2]
sub = amb.restricted(cloud.ids[2:])
holes = [deleted_point_profile(amb, y, sub) for y in gone]
print(f"\nplane: true hole distance {amb['e'](*gone):.4f}, completion distance {hat_distance('e', *holes):.4f}")
