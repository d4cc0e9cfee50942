"""Charging-aware service design: depot charging and in-motion charging.

Depot charging only stretches the cycle: every loop of motion time T is
followed by T*(discharge/charge)/efficiency hours of stationary
recharging, so the core optimizer applies verbatim with the longer
cycle time.

In-motion (vehicle-to-vehicle) charging keeps the cycle at T but adds an
energy budget: the pod detached at a stop recharges for one headway and
must cover its own traction plus the transfer losses of feeding the
other pods on the longest segment.  That couples the headway to the bus
length and creates two extra regimes: an energy-limited stage where the
optimal frequency falls as demand grows, and a hard demand ceiling
beyond which no frequency balances the budget.

The dwell-recovery term divides by the transfer efficiency, matching
the in-motion transfer term; a multiplying convention is arguable but
the dividing form is applied consistently throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import design
from .demand import DemandStatistics
from .design import Design, strategy_context
from .parameters import EnergyParameters, ServiceParameters


def depot_cycle_time(params: ServiceParameters, energy: EnergyParameters) -> float:
    """Cycle time including the stationary full-recharge dwell.

    Recharging a loop's consumption delta_minus*T at an effective rate
    efficiency*charge_rate takes T*delta_minus/(efficiency*charge_rate)
    hours, so the cycle scales by one plus that ratio.
    """
    return params.cycle_time * (
        1.0 + energy.discharge_rate / (energy.efficiency * energy.charge_rate))


def optimize_depot(params: ServiceParameters, stats: DemandStatistics,
                   energy: EnergyParameters, demand: float) -> Design:
    """Optimal design when buses recharge fully at the terminal."""
    return design._optimize(strategy_context(params, stats, "depot", energy),
                            demand)


def optimize_mobile(params: ServiceParameters, stats: DemandStatistics,
                    energy: EnergyParameters, demand: float) -> Design:
    """Optimal design when the boarding pod recharges the bus in motion."""
    return design._optimize(strategy_context(params, stats, "mobile", energy),
                            demand)


def mobile_headway_energy_bound(energy: EnergyParameters, pods: float) -> float:
    """Largest frequency whose headway recharges one pod enough to feed
    a ``pods``-long bus across the longest segment."""
    if pods < 2:
        raise ValueError("pods: a bus needs at least two pods")
    return energy.charge_rate / (energy.discharge_rate * energy.max_segment_time
                                 * (pods - 1.0 + energy.efficiency))


def els_threshold(params: ServiceParameters, stats: DemandStatistics,
                  energy: EnergyParameters) -> float:
    """Demand at which the declining energy cap reaches the headway cap.

    Above this demand the energy budget, not the swap time, limits the
    frequency (the energy-limited stage) -- provided the window is still
    open, i.e. this value lies below ``mci_threshold``.  Otherwise the
    stage never materializes.
    """
    ctx = strategy_context(params, stats, "mobile", energy)
    return ctx.energy_cap_meets_headway_cap()


def mci_threshold(params: ServiceParameters, stats: DemandStatistics,
                  energy: EnergyParameters) -> float:
    """Demand ceiling of in-motion charging: beyond it the energy cap
    falls below the busiest-stop frequency floor."""
    ctx = strategy_context(params, stats, "mobile", energy)
    return ctx.energy_infeasible_demand()


@dataclass(frozen=True)
class BatteryTrace:
    """Stop-by-stop battery levels of the charging pod.

    ``levels[0]`` is the initial charge; ``levels[i] = levels[i-1] +
    delta_e[i-1]`` exactly.  ``first_negative`` is the index of the
    first negative level, None for a feasible trace.
    """

    levels: tuple[float, ...]
    delta_e: tuple[float, ...]
    first_negative: int | None

    @property
    def feasible(self) -> bool:
        return self.first_negative is None


def battery_trajectory(energy: EnergyParameters, frequency: float, pods: float,
                       initial_kwh: float, laps: int = 1) -> BatteryTrace:
    """Charging-pod battery recursion over whole laps.

    Per stop the pod spends delta_minus*T_seg on itself, feeds the other
    pods-1 pods through the transfer loss, and recovers
    charge_rate/(frequency*efficiency) during its one-headway dwell.
    Negative levels are reported, not raised; they diagnose an
    infeasible (frequency, pods) pair.
    """
    if frequency <= 0:
        raise ValueError("frequency: must be positive")
    if pods < 2:
        raise ValueError("pods: a bus needs at least two pods")
    if laps < 1:
        raise ValueError("laps: need at least one lap")
    if initial_kwh < 0:
        raise ValueError("initial_kwh: must be non-negative")
    recover = energy.charge_rate / (frequency * energy.efficiency)
    levels = [initial_kwh]
    deltas: list[float] = []
    first_negative = None
    for _ in range(laps):
        for seg in energy.segment_times:
            drain = energy.discharge_rate * seg
            step = -drain - (pods - 1.0) * drain / energy.efficiency + recover
            deltas.append(step)
            levels.append(levels[-1] + step)
            if first_negative is None and levels[-1] < 0:
                first_negative = len(levels) - 1
    return BatteryTrace(tuple(levels), tuple(deltas), first_negative)
