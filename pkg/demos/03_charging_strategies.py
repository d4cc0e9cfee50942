"""Electric operation: recharging at the depot vs charging in motion.

Depot charging keeps spare buses rotating through the chargers, which
stretches the effective cycle time and therefore the fleet.  In-motion
charging tops the front pod up from a charging pod that rides along,
paying a premium per pod-hour but keeping every bus in service; its
price is a ceiling on how much charge a service window can transfer.
"""

import dataclasses

from slambus import (DemandStatistics, EnergyParameters, ServiceParameters,
                     battery_trajectory, depot_cycle_time, els_threshold,
                     mci_threshold, mobile_headway_energy_bound,
                     optimize_core, optimize_depot, optimize_mobile)

params = ServiceParameters()
stats = DemandStatistics.from_peaks(0.1, 0.4)
energy = EnergyParameters()

tc = depot_cycle_time(params, energy)
print(f"depot charging stretches the 0.400 h cycle to {tc:.4f} h")
print(f"in-motion charging caps a two-pod bus at "
      f"{mobile_headway_energy_bound(energy, 2.0):.1f} bus/h on energy alone")
print()

print(f"{'X':>6} | {'no charging':^22} | {'depot':^22} | {'in-motion':^22}")
print(f"{'':>6} | {'f*':>7} {'P*':>5} {'$/pax':>7} | {'f*':>7} {'P*':>5} "
      f"{'$/pax':>7} | {'f*':>7} {'P*':>5} {'$/pax':>7}")
for X in (200, 500, 1000, 2000, 4000):
    cells = []
    for d in (optimize_core(params, stats, X),
              optimize_depot(params, stats, energy, X),
              optimize_mobile(params, stats, energy, X)):
        cells.append(f"{d.frequency:7.2f} {d.pods:5.2f} {d.avg_cost:7.4f}")
    print(f"{X:6d} | " + " | ".join(cells))

print()
d = optimize_mobile(params, stats, energy, 7000.0)
print(f"in-motion at 7000 pax/h: {d.stage} "
      f"(demand ceiling {d.stage.threshold:.1f} pax/h)")

print()
print("=== a weak charger creates an energy-limited stage ===")
weak = dataclasses.replace(energy, charge_rate=100.0)
els, mci = els_threshold(params, stats, weak), mci_threshold(params, stats, weak)
print(f"with 100 kW charging the declining energy cap binds from "
      f"{els:.0f} pax/h up to the ceiling at {mci:.0f} pax/h")
for X in (3600, 3800, 4000):
    d = optimize_mobile(params, stats, weak, float(X))
    print(f"  X={X}: {str(d.stage):4s} f*={d.frequency:.3f}  P*={d.pods:.3f}"
          if d.feasible else f"  X={X}: {d.stage}")
print("frequency now FALLS with demand: more pods per bus need longer")
print("service windows to stay charged")

print()
print("=== battery trace of the front pod over one lap ===")
f, P = 30.0, 3.0
trace = battery_trajectory(energy, f, P, initial_kwh=12.0, laps=1)
print(f"f={f}/h, P={P}: start 12.0 kWh, end {trace.levels[-1]:.2f} kWh "
      f"({'ok' if trace.feasible else 'depletes'})")
print("  stop levels: " + " ".join(f"{lv:.1f}" for lv in trace.levels))
