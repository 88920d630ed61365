"""Failure of the encoded Z quarter turn against the physical failure rate."""

from loqc import analysis
from loqc.montecarlo import crossing, sweep

grid = [0.1, 0.2, 0.3, 0.4, 0.45, 0.5, 0.55, 0.6]
points = sweep("logical_z90", grid, n=20_000, seed=7)

print(f"{'f':>5} {'sampled':>9} {'formula':>9} {'z':>7}")
for p in points:
    c = p.comparison
    print(f"{p.f:5.2f} {c.empirical:9.4f} {c.analytic:9.4f} {c.z_score:7.2f}")

print("fixed point of the level map:", analysis.threshold())
print("sampled curve crosses y = f between", crossing(points))

# concatenating below threshold drives the failure rate down quickly
for k, f in enumerate(analysis.iterate_levels(0.25, 4).f):
    print(f"level {k}: f = {f:.3g}")
