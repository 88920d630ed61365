"""Operation counts per level and the erasure-code bounds."""

from loqc import analysis, resources
from loqc.montecarlo import run_trials
from loqc.noise import NoiseParams

for l in range(1, 5):
    print(f"parity tree depth {l}: recursion {tuple(resources.rv_sl(l))}, "
          f"closed form {tuple(resources.rv_sl_closed(l))}")

sched = analysis.iterate_levels(0.25, 2)
for row in resources.level_table(sched, l=3):
    print(row)
print("rounded-constant variant:",
      tuple(round(x, 1) for x in resources.compose_levels(sched, 3, 2, printed_constants=True)))

for kind in ("te", "zrot_merge", "kickback", "recovery"):
    print(kind, round(resources.expected_attempts(kind, 0.25), 3))

for s in (0.005, 0.009615, 0.02):
    b = analysis.erasure_bounds(s)
    print(f"s={s}: recovery<={b.recovery_bound:.4f} measurement<={b.measurement_bound:.6f} "
          f"coupling<={b.coupling_bound:.6f} below threshold: {b.below_threshold}")

stats = run_trials("erasure_measure_z", NoiseParams(s=0.02), 50_000, seed=1)
print("sampled logical loss at s=0.02:", stats.rate, "interval", stats.wilson_interval)
