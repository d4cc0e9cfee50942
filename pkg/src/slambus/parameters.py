"""Parameter containers shared by the design models and the simulator.

Unit conventions: every duration is in hours, money in $/h, demand in
pax/h, energy in kWh and power in kW.  Unit conversion (seconds, km/h,
meters) happens at the configuration boundary, never inside a model.
"""

from __future__ import annotations

from dataclasses import dataclass, field


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValueError(message)


@dataclass(frozen=True)
class ServiceParameters:
    """Line geometry, pod characteristics and unit costs.

    Attributes
    ----------
    pod_capacity : float
        Passengers one pod can hold.
    board_time : float
        Hours one passenger needs to board or alight.
    swap_time : float
        Hours to detach a pod, move it aside and attach the standby pod.
    cycle_time : float
        Hours a bus spends in motion for one full loop of the line.
    stop_count : int
        Number of stops on the loop.
    pod_cost : float
        Operating cost of one pod-hour, $/h.
    wait_value : float
        Value of one passenger-hour spent waiting, $/h.
    invehicle_value : float
        Value of one passenger-hour spent riding, $/h.
    trip_ratio : float
        Mean trip length divided by line length; scales in-vehicle time.
    """

    pod_capacity: float = 16.0
    board_time: float = 3.0 / 3600.0
    swap_time: float = 10.0 / 3600.0
    cycle_time: float = 0.4
    stop_count: int = 20
    pod_cost: float = 8.04
    wait_value: float = 4.44
    invehicle_value: float = 1.48
    trip_ratio: float = 0.4

    def __post_init__(self) -> None:
        _require(self.pod_capacity > 0, "pod_capacity: must be positive")
        _require(self.board_time >= 0, "board_time: must be non-negative")
        _require(self.swap_time >= 0, "swap_time: must be non-negative")
        _require(self.cycle_time > 0, "cycle_time: must be positive")
        _require(self.stop_count >= 2, "stop_count: needs at least two stops")
        _require(self.pod_cost > 0, "pod_cost: must be positive")
        _require(self.wait_value > 0, "wait_value: must be positive")
        _require(self.invehicle_value >= 0, "invehicle_value: must be non-negative")
        _require(0 < self.trip_ratio <= 1, "trip_ratio: must be in (0, 1]")

    @property
    def min_headway(self) -> float:
        """Shortest workable headway: two pod services plus one swap."""
        return 2.0 * self.pod_capacity * self.board_time + self.swap_time

    @property
    def max_frequency(self) -> float:
        """Frequency cap implied by the minimum feasible headway."""
        h = self.min_headway
        return float("inf") if h == 0 else 1.0 / h


@dataclass(frozen=True)
class EnergyParameters:
    """Charging and discharging characteristics of the pods.

    ``segment_times`` holds the driving time of each inter-stop segment
    of the loop, in hours.  The energy bound on headways depends only on
    the longest one.
    """

    charge_rate: float = 160.0        # kW drawn while connected to a charger
    discharge_rate: float = 40.0      # kW consumed by one moving pod
    efficiency: float = 0.9627        # fraction of transferred energy retained
    battery_hours: float = 8.0        # hours of motion on one full battery
    segment_times: tuple[float, ...] = field(default_factory=lambda: (0.02,) * 20)
    mobile_pod_cost: float = 8.21     # $/pod-h when pods carry charging gear

    def __post_init__(self) -> None:
        _require(self.discharge_rate > 0, "discharge_rate: must be positive")
        _require(self.charge_rate >= self.discharge_rate,
                 "charge_rate: must be at least the discharge rate")
        _require(0 < self.efficiency <= 1, "efficiency: must be in (0, 1]")
        _require(self.battery_hours > 0, "battery_hours: must be positive")
        _require(len(self.segment_times) >= 1, "segment_times: must not be empty")
        _require(all(s > 0 for s in self.segment_times),
                 "segment_times: every segment must be positive")
        _require(self.mobile_pod_cost > 0, "mobile_pod_cost: must be positive")

    @property
    def max_segment_time(self) -> float:
        return max(self.segment_times)

    @property
    def battery_kwh(self) -> float:
        """Energy content of one full pod battery."""
        return self.battery_hours * self.discharge_rate


@dataclass(frozen=True)
class TraditionalParameters:
    """Inputs of the conventional fixed-size bus benchmark.

    The operating cost of a conventional bus splits into a size
    independent part (``base_bus_cost``) and a per-seat part
    (``seat_cost``); both are $ per bus-hour.
    """

    base_bus_cost: float = 8.04
    seat_cost: float = 0.25
    cycle_time: float = 0.4
    board_time: float = 3.0 / 3600.0
    wait_value: float = 4.44
    invehicle_value: float = 1.48
    trip_ratio: float = 0.4

    def __post_init__(self) -> None:
        _require(self.base_bus_cost > 0, "base_bus_cost: must be positive")
        _require(self.seat_cost >= 0, "seat_cost: must be non-negative")
        _require(self.cycle_time > 0, "cycle_time: must be positive")
        _require(self.board_time > 0, "board_time: must be positive")
        _require(self.wait_value > 0, "wait_value: must be positive")
        _require(self.invehicle_value >= 0, "invehicle_value: must be non-negative")
        _require(0 < self.trip_ratio <= 1, "trip_ratio: must be in (0, 1]")
