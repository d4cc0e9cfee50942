"""How the optimal design moves through operating stages as demand grows.

Low demand buys frequency for waiting time alone.  Rising demand first
pins the two-pod floor, then couples frequency with the pod count, and
finally hits the shortest workable headway, after which only the bus
itself can grow.  Past the point where even the shortest headway cannot
clear the busiest stop, no design works at all.
"""

from slambus import (DemandStatistics, ServiceParameters, check_feasibility,
                     demand_sweep, detect_stage_boundaries, optimize_core,
                     stage_intervals, stage_thresholds)

params = ServiceParameters()
stats = DemandStatistics.from_peaks(0.1, 0.4)

print("stage map at the stock parameters:")
for label, lo, hi in stage_intervals(params, stats):
    hi_txt = f"{hi:9.1f}" if hi != float("inf") else "      inf"
    print(f"  {str(label):32s} X in [{lo:9.1f}, {hi_txt})")

print()
print("closed-form transition demands:")
for name, value in stage_thresholds(params, stats):
    print(f"  {name:24s} {'absent' if value is None else f'{value:.1f} pax/h'}")

print()
print("designs along the way:")
print(f"  {'X':>6} {'f*':>8} {'P*':>7} {'P_int':>5} {'stage':>6} "
      f"{'$/pax':>7}")
for X in (100, 400, 800, 1000, 1400, 1800, 3000, 5000):
    d = optimize_core(params, stats, float(X))
    print(f"  {X:6d} {d.frequency:8.3f} {d.pods:7.3f} {d.pods_int:5d} "
          f"{str(d.stage):>6} {d.avg_cost:7.4f}")

print()
fc = check_feasibility(params, stats, 6000.0)
print(f"at 6000 pax/h: feasible={fc.ok} (limit {fc.demand_limit:.1f} pax/h)")
print(f"  verdict: {fc.label}")

print()
print("a fine sweep recovers the same boundaries numerically:")
rows = demand_sweep(params, stats, 100.0, 2000.0, steps=1901)
for x, a, b in detect_stage_boundaries(rows):
    print(f"  {a} -> {b} near X = {x:.1f}")
