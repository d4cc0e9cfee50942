"""Demand profiles: from an OD matrix to the two peaks the designs use.

The design formulas never see the full OD matrix.  They consume two
dimensionless numbers: the flow peak (busiest boarding or alighting
stop, as a share of total demand) and the load peak (busiest inter-stop
section).  This script builds matrices, extracts the peaks, and shows
the screening that decides which stops need a full halt.
"""

import numpy as np

from slambus import (ODMatrix, ServiceParameters, compute_statistics,
                     identify_full_stops, synthesize_od, trip_ratio_from_od)

params = ServiceParameters()

print("=== uniform demand over a 20 stop loop ===")
od = synthesize_od(20, 1000.0)
st = compute_statistics(od)
print(f"total {st.total:.0f} pax/h")
print(f"flow peak  phi = {st.peak_flow_share:.4f}")
print(f"load peak  rho = {st.peak_load_share:.4f}")
print(f"trip ratio l/L = {trip_ratio_from_od(od):.4f}")

print()
print("=== synthesized to match the stock design peaks ===")
od = synthesize_od(20, 1000.0, "peaked", rho_target=0.4, phi_target=0.1)
st = compute_statistics(od)
print(f"requested rho=0.4 phi=0.1, got rho={st.peak_load_share:.4f} "
      f"phi={st.peak_flow_share:.4f}")
print("per-stop boardings (pax/h):")
print("  " + " ".join(f"{b:6.1f}" for b in st.boardings))
print("section loads (pax/h):")
print("  " + " ".join(f"{v:6.1f}" for v in st.loads))

print()
print("=== full-stop screening ===")
# hammer stop 1 with a terminal-style surge
flows = np.array(od.flows)
flows[0, 9] += 700.0
surged = ODMatrix(flows)
res = identify_full_stops(surged, params)
print(f"one pod exchange absorbs {res.threshold:.1f} pax/h per stop")
print(f"stops needing a full halt: {sorted(res.full_stops) or 'none'}")
print(f"flow peak over the remaining swap stops: "
      f"{res.statistics.peak_flow_share:.4f}")
