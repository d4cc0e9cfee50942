"""Cross-checking the closed forms against brute force, then bulk sweeps.

The optimizer solves each stage analytically.  The oracle knows nothing
about stages: it scans a dense frequency x pod grid and keeps the
cheapest feasible cell.  If the algebra is right, the closed form is
never beaten by more than grid resolution.
"""

import time

import numpy as np

from slambus import (DemandStatistics, ServiceParameters, compare,
                     demand_sweep, grid_search, optimize_core,
                     random_scenario, write_sweep_csv)

params = ServiceParameters()
stats = DemandStatistics.from_peaks(0.1, 0.4)

print("single point, stock parameters, 1400 pax/h:")
closed = optimize_core(params, stats, 1400.0)
best = grid_search(params, stats, 1400.0)
rep = compare(closed, best)
print(f"  closed form: f={closed.frequency:.5f} P={closed.pods:.5f} "
      f"cost={closed.cost_total:.4f}")
print(f"  grid search: f={best.frequency:.5f} P={best.pods:.5f} "
      f"cost={best.cost:.4f}")
print(f"  relative cost gap: {100 * rep.cost_gap_rel:+.5f}% "
      "(negative or zero means the algebra won)")

print()
n = 30
print(f"{n} random parameter sets per strategy:")
rng = np.random.default_rng(1)
for strategy in ("core", "depot", "mobile"):
    worst = 0.0
    t0 = time.time()
    for _ in range(n):
        p, st, en, demand = random_scenario(rng, strategy)
        if strategy == "core":
            d = optimize_core(p, st, demand)
        else:
            from slambus import optimize_depot, optimize_mobile
            d = (optimize_depot if strategy == "depot"
                 else optimize_mobile)(p, st, en, demand)
        worst = max(worst, compare(d, grid_search(p, st, demand, strategy,
                                                  en)).cost_gap_rel)
    print(f"  {strategy:7s} worst gap {100 * worst:.4f}%  "
          f"({time.time() - t0:.1f} s)")

print()
print("bulk sweep to CSV:")
rows = demand_sweep(params, stats, 50.0, 5500.0, steps=500)
write_sweep_csv(rows, "/tmp/design_sweep.csv")
feasible = sum(r.feasible for r in rows)
print(f"  wrote /tmp/design_sweep.csv: {len(rows)} rows, "
      f"{feasible} feasible, {len(rows) - feasible} beyond the demand limit")
with open("/tmp/design_sweep.csv") as fh:
    for line in list(fh)[:4]:
        print("  | " + line.rstrip())
