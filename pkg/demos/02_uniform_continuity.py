"""x^2 is continuous on [0, 100] but not uniformly so; x/2 is both.

On a sample spaced 0.01 the "widest delta" for x^2 at eps = 0.5 collapses to
the sample spacing itself, which is the finite-scale signature of failure.

Run: python demos/02_uniform_continuity.py
"""
from gaugespace import ToleranceProfile, check_continuity, check_uniform_continuity, real_valued_map
from gaugespace import spacefile as sf

b = sf.from_doc(sf.interval(10001, 0, 100))
tol = ToleranceProfile(0, (0.5,))
floor = b.gauge["abs"].min_positive

f, gY = real_valued_map(b.space, b.maps["square"]["values"])
v = check_uniform_continuity(f, b.gauge, gY, tol)
member, radius, pair = v.counterexamples[("abs", 0.5)][0]
print(f"x^2 uniform at eps=0.5: {v.continuous}; widest radius {radius:.4g} vs spacing {floor:.4g}; pair {pair}")

at = check_continuity(f, b.gauge, gY, 100, tol)
print(f"x^2 at x=1 (id 100): continuous={at.continuous}, delta={at.certificates[('abs', 0.5)][1]:.4g}")

f, gY = real_valued_map(b.space, b.maps["half"]["values"])
v = check_uniform_continuity(f, b.gauge, gY, tol, lambda e: e)
print(f"x/2 uniform with delta = eps: {v.continuous}")
