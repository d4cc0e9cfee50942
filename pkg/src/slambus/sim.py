"""Discrete-event simulation of a stop-less modular loop line.

Buses circulate a loop of equally spaced stops.  At ordinary stops the
front pod detaches in motion (the bus never halts) and the pod dropped
there one headway earlier attaches, carrying the passengers it boarded
in the meantime.  At designated full stops the whole bus halts and
serves all boarding and alighting at the curb.

Charging strategies differ only in where energy enters:

* depot: the bus pool drains while moving; when the remaining charge at
  the terminal cannot safely cover another lap, the bus stands still
  and recharges completely, opening a visible gap in its trajectory.
* mobile: the detached pod recharges during its dwell and feeds the
  other pods in motion, so buses never stand for charging; the front
  pod's level follows the stop-to-stop energy recursion exactly.

Everything is driven by one seeded generator, so a seed fixes the whole
event log byte for byte.  Times are seconds, positions meters, energy
kWh throughout the log.
"""

from __future__ import annotations

import csv
import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .parameters import EnergyParameters, ServiceParameters

FULL_EVENTS = ("bus_arrive", "bus_depart", "pod_detach", "pod_attach",
               "board", "alight", "recharge_start", "recharge_end", "fault")


@dataclass(frozen=True)
class SimConfig:
    service: ServiceParameters
    energy: EnergyParameters
    strategy: str = "depot"
    n_buses: int = 3
    n_stops: int = 9
    full_stops: frozenset[int] = frozenset({1, 5})
    horizon: float = 3.0                 # hours
    demand: float = 1000.0               # pax/h over the whole line
    arrival_rates: tuple[float, ...] | None = None   # pax/h per stop
    destination_weights: tuple[float, ...] | None = None  # stops-ahead distribution
    pods_per_bus: int = 4
    battery_kwh: float | None = None     # bus pool; defaults to the energy rating
    segment_hours: float = 0.02          # uniform inter-stop travel time
    spacing_m: float = 400.0
    seed: int = 0
    pod_initial_soc: float = 0.2
    recharge_margin: float = 1.05        # recharge when below margin * lap burn
    initial_soc: tuple[float, ...] | None = None     # per bus, staggered default

    def __post_init__(self) -> None:
        if self.strategy not in ("depot", "mobile"):
            raise ValueError(f"strategy: unknown strategy {self.strategy!r}")
        if self.n_buses < 1:
            raise ValueError("n_buses: need at least one bus")
        if self.n_stops < 2:
            raise ValueError("n_stops: need at least two stops")
        if not self.full_stops <= set(range(1, self.n_stops + 1)):
            raise ValueError("full_stops: must be existing stop numbers")
        if len(self.full_stops) >= self.n_stops:
            raise ValueError("full_stops: at least one swap stop is required")
        if self.horizon <= 0:
            raise ValueError("horizon: must be positive")
        if self.pods_per_bus < 2:
            raise ValueError("pods_per_bus: a bus needs at least two pods")
        if self.arrival_rates is not None and len(self.arrival_rates) != self.n_stops:
            raise ValueError("arrival_rates: need one rate per stop")
        if self.recharge_margin < 1.0:
            raise ValueError("recharge_margin: must be at least one")

    @property
    def battery(self) -> float:
        return self.energy.battery_kwh if self.battery_kwh is None else self.battery_kwh

    @property
    def pod_battery(self) -> float:
        return self.battery / self.pods_per_bus

    @property
    def rates(self) -> tuple[float, ...]:
        if self.arrival_rates is not None:
            return self.arrival_rates
        return (self.demand / self.n_stops,) * self.n_stops

    @property
    def lap_motion_s(self) -> float:
        return self.n_stops * self.segment_hours * 3600.0

    @property
    def nominal_headway_s(self) -> float:
        return self.lap_motion_s / self.n_buses

    @property
    def loop_length_m(self) -> float:
        return self.n_stops * self.spacing_m


@dataclass(frozen=True)
class Event:
    time_s: float
    event: str
    bus: int | None = None
    pod: int | None = None
    stop: int | None = None
    pax: int | None = None
    detail: str = ""


@dataclass
class Passenger:
    pax_id: int
    origin: int
    destination: int
    arrival_s: float
    board_s: float | None = None
    alight_s: float | None = None
    bus: int | None = None


@dataclass
class EventLog:
    config: SimConfig
    events: list[Event]
    passengers: list[Passenger]
    trajectories: dict[int, list[tuple[float, float]]]

    def bus_ids(self) -> list[int]:
        return sorted(self.trajectories)


# ---------------------------------------------------------------------------
# engine
# ---------------------------------------------------------------------------

@dataclass
class _Pod:
    pod_id: int
    level: float          # kWh, meaningful under mobile charging only
    drop_s: float
    alighters: int


@dataclass
class _Bus:
    bus_id: int
    battery: float
    front: _Pod
    onboard: dict[int, list[Passenger]] = field(default_factory=dict)
    lap: int = -1

    def count(self) -> int:
        return sum(len(v) for v in self.onboard.values())


def _generate_passengers(cfg: SimConfig, rng: np.random.Generator
                         ) -> list[list[Passenger]]:
    """Poisson arrivals per stop, destinations drawn over stops ahead."""
    n = cfg.n_stops
    weights = cfg.destination_weights
    if weights is None:
        weights = (1.0,) * (n - 1)
    w = np.asarray(weights, dtype=float)
    if len(w) != n - 1 or np.any(w < 0) or w.sum() <= 0:
        raise ValueError("destination_weights: need non-negative weights for "
                         "each of the n_stops-1 stops ahead")
    w = w / w.sum()
    horizon_s = cfg.horizon * 3600.0
    queues: list[list[Passenger]] = []
    next_id = 0
    for stop in range(1, n + 1):
        count = int(rng.poisson(cfg.rates[stop - 1] * cfg.horizon))
        times = np.sort(rng.uniform(0.0, horizon_s, count))
        ahead = rng.choice(n - 1, size=count, p=w) + 1
        queue = []
        for k in range(count):
            dest = (stop - 1 + int(ahead[k])) % n + 1
            queue.append(Passenger(next_id, stop, dest, float(times[k])))
            next_id += 1
        queues.append(queue)
    return queues


class _Sim:
    def __init__(self, cfg: SimConfig):
        self.cfg = cfg
        self.t_board = cfg.service.board_time * 3600.0
        self.t_swap = cfg.service.swap_time * 3600.0
        self.seg_s = cfg.segment_hours * 3600.0
        self.horizon_s = cfg.horizon * 3600.0
        self.k_p = cfg.service.pod_capacity
        self.bus_cap = cfg.pods_per_bus * self.k_p
        # energy bookkeeping, all kWh
        e = cfg.energy
        self.seg_burn_bus = cfg.pods_per_bus * e.discharge_rate * cfg.segment_hours
        self.seg_burn_pod = (e.discharge_rate * cfg.segment_hours
                             * (1.0 + (cfg.pods_per_bus - 1.0) / e.efficiency))
        self.lap_burn = cfg.n_stops * self.seg_burn_bus
        self.events: list[Event] = []
        self._seq = 0
        rng = np.random.default_rng(cfg.seed)
        self.queues = _generate_passengers(cfg, rng)
        self.q_ptr = [0] * cfg.n_stops
        self.last_departure = [-math.inf] * (cfg.n_stops + 1)
        self.pods: dict[int, _Pod] = {}
        for stop in range(1, cfg.n_stops + 1):
            if stop not in cfg.full_stops:
                self.pods[stop] = _Pod(stop, cfg.pod_initial_soc * cfg.pod_battery,
                                       0.0, 0)
        soc = cfg.initial_soc
        if soc is None:
            soc = tuple(max(0.5, 1.0 - 0.05 * b) for b in range(cfg.n_buses))
        if len(soc) != cfg.n_buses:
            raise ValueError("initial_soc: need one fraction per bus")
        self.buses = [
            _Bus(b, soc[b] * cfg.battery,
                 _Pod(100 + b, cfg.pod_initial_soc * cfg.pod_battery, 0.0, 0))
            for b in range(cfg.n_buses)
        ]
        self.traj: dict[int, list[tuple[float, float]]] = {
            b: [] for b in range(cfg.n_buses)}
        self.all_pax: list[Passenger] = [p for q in self.queues for p in q]

    # -- logging ------------------------------------------------------------

    def log(self, time_s, event, bus=None, pod=None, stop=None, pax=None,
            detail="") -> None:
        self.events.append(Event(time_s, event, bus, pod, stop, pax, detail))

    def point(self, bus: int, t: float, pos: float) -> None:
        track = self.traj[bus]
        if not track or track[-1] != (t, pos):
            track.append((t, pos))

    # -- passenger service ----------------------------------------------------

    def _alight(self, bus: _Bus, stop: int, t: float,
                cap: int | None = None) -> int:
        """Alight passengers destined here; at swap stops at most a
        pod-load leaves per visit, the overflow rides another lap."""
        waiting = bus.onboard.pop(stop, [])
        leaving, staying = waiting, []
        if cap is not None and len(waiting) > cap:
            leaving, staying = waiting[:cap], waiting[cap:]
        for p in leaving:
            p.alight_s = t
            self.log(t, "alight", bus=bus.bus_id, stop=stop, pax=p.pax_id)
        if staying:
            bus.onboard[stop] = staying
        return len(leaving)

    def _board(self, bus: _Bus, stop: int, t: float, limit: int) -> int:
        queue = self.queues[stop - 1]
        ptr = self.q_ptr[stop - 1]
        boarded = 0
        while (boarded < limit and ptr < len(queue)
               and queue[ptr].arrival_s <= t):
            p = queue[ptr]
            p.board_s = t
            p.bus = bus.bus_id
            bus.onboard.setdefault(p.destination, []).append(p)
            self.log(t, "board", bus=bus.bus_id, stop=stop, pax=p.pax_id)
            ptr += 1
            boarded += 1
        self.q_ptr[stop - 1] = ptr
        return boarded

    # -- stop handlers --------------------------------------------------------

    def _serve_full_stop(self, bus: _Bus, stop: int, t: float) -> float:
        # the whole bus halts, so every pod door serves in parallel
        alighted = self._alight(bus, stop, t)
        boarded = self._board(bus, stop, t, self.bus_cap - bus.count())
        dwell = (alighted + boarded) * self.t_board / self.cfg.pods_per_bus
        return t + dwell

    def _serve_swap_stop(self, bus: _Bus, stop: int, t: float) -> float:
        mobile = self.cfg.strategy == "mobile"
        waiting = self.pods[stop]
        window = t - waiting.drop_s
        service_room = math.floor((window - self.t_swap) / self.t_board)
        board_cap = service_room - waiting.alighters
        if board_cap < 0:
            # the next bus arrived before the pod even finished alighting
            self.log(t, "fault", bus=bus.bus_id, pod=waiting.pod_id, stop=stop,
                     detail="service_window_too_short")
            board_cap = 0
        if mobile:
            gain = self.cfg.energy.charge_rate * (window / 3600.0) / self.cfg.energy.efficiency
            waiting.level = min(self.cfg.pod_battery, waiting.level + gain)

        alighted = self._alight(bus, stop, t, cap=int(self.k_p))
        limit = min(board_cap, int(self.k_p), self.bus_cap - bus.count())
        boarded = self._board(bus, stop, t, max(0, limit))

        detail = f"level={bus.front.level:.9f}" if mobile else ""
        self.log(t, "pod_detach", bus=bus.bus_id, pod=bus.front.pod_id,
                 stop=stop, detail=detail)
        dropped = bus.front
        dropped.drop_s = t
        dropped.alighters = alighted
        detail = f"level={waiting.level:.9f};window={window:.9f}" if mobile else ""
        self.log(t, "pod_attach", bus=bus.bus_id, pod=waiting.pod_id,
                 stop=stop, pax=boarded, detail=detail)
        self.pods[stop] = dropped
        bus.front = waiting
        return t   # stop-less: the bus never halts at a swap stop

    def _needs_recharge(self, bus: _Bus) -> bool:
        return (self.cfg.strategy == "depot"
                and bus.battery < self.cfg.recharge_margin * self.lap_burn)

    def _start_recharge(self, bus: _Bus, t: float) -> float:
        """Pull the bus into the off-line depot bay; returns the time the
        pack is full again.  The curb stays free for the buses behind."""
        cfg = self.cfg
        missing = cfg.battery - bus.battery
        rate = cfg.pods_per_bus * cfg.energy.efficiency * cfg.energy.charge_rate
        self.log(t, "recharge_start", bus=bus.bus_id, stop=1,
                 detail=f"added={missing:.9f}")
        bus.battery = cfg.battery
        return t + missing / rate * 3600.0

    # -- main loop ------------------------------------------------------------

    def run(self) -> EventLog:
        cfg = self.cfg
        self.heap: list[tuple[float, int, int, int, str]] = []
        for bus in self.buses:
            self._heap_push(bus.bus_id * cfg.nominal_headway_s, bus.bus_id, 1)
        # a bus leaving the depot bay merges no closer than one full
        # pod-service window behind the previous departure
        merge_gap = self.t_swap + self.k_p * self.t_board
        while self.heap:
            t, _, bus_id, stop, kind = heapq.heappop(self.heap)
            if t > self.horizon_s:
                continue
            bus = self.buses[bus_id]
            if kind == "reenter":
                self.log(t, "recharge_end", bus=bus_id, stop=1,
                         detail=f"batt={bus.battery:.9f}")
                depart = max(t, self.last_departure[1] + merge_gap)
                self._depart(bus, 1, depart)
                continue
            if t < self.last_departure[stop]:
                # cannot overtake: wait for the bus ahead to clear the stop
                wait_pos = (cfg.loop_length_m if stop == 1 and bus.lap >= 0
                            else self._pos(stop))
                self.point(bus_id, t, wait_pos)
                self._heap_push(self.last_departure[stop], bus_id, stop)
                continue
            if stop == 1:
                bus.lap += 1
            pos = self._pos(stop)
            if stop == 1 and bus.lap > 0:
                self.point(bus_id, t, cfg.loop_length_m)
            self.point(bus_id, t, pos)
            batt = f"batt={bus.battery:.9f}" if cfg.strategy == "depot" else ""
            self.log(t, "bus_arrive", bus=bus_id, stop=stop, detail=batt)

            if stop in cfg.full_stops:
                depart = self._serve_full_stop(bus, stop, t)
            else:
                depart = self._serve_swap_stop(bus, stop, t)
            self.last_departure[stop] = depart
            if stop == 1 and self._needs_recharge(bus):
                self.point(bus_id, depart, pos)
                ready = self._start_recharge(bus, depart)
                self._heap_push(ready, bus_id, 1, kind="reenter")
                continue
            self._depart(bus, stop, depart)
        self.events.sort(key=lambda ev: ev.time_s)
        return EventLog(cfg, self.events, self.all_pax, self.traj)

    def _depart(self, bus: _Bus, stop: int, depart: float) -> None:
        """Log the departure and commit the run to the next stop."""
        cfg = self.cfg
        pos = self._pos(stop)
        self.point(bus.bus_id, depart, pos)
        self.log(depart, "bus_depart", bus=bus.bus_id, stop=stop)
        if cfg.strategy == "depot":
            bus.battery -= self.seg_burn_bus
        else:
            bus.front.level -= self.seg_burn_pod
        nxt = stop % cfg.n_stops + 1
        arrive = depart + self.seg_s
        if arrive <= self.horizon_s:
            self._heap_push(arrive, bus.bus_id, nxt)
        else:
            frac = max(0.0, (self.horizon_s - depart) / self.seg_s)
            self.point(bus.bus_id, self.horizon_s, pos + frac * cfg.spacing_m)

    def _pos(self, stop: int) -> float:
        return (stop - 1) * self.cfg.spacing_m

    def _heap_push(self, t: float, bus_id: int, stop: int,
                   kind: str = "arrive") -> None:
        heapq.heappush(self.heap, (t, self._next_seq(), bus_id, stop, kind))

    def _next_seq(self) -> int:
        self._seq += 1
        return self._seq


def run_simulation(cfg: SimConfig) -> EventLog:
    """Simulate the configured horizon; deterministic for a fixed seed."""
    return _Sim(cfg).run()


# ---------------------------------------------------------------------------
# analysis
# ---------------------------------------------------------------------------

def waiting_time_stats(log: EventLog) -> dict[str, float]:
    """Waits of boarded passengers in seconds; the never-boarded are
    excluded from the moments but counted in ``unserved``."""
    waits = np.array([p.board_s - p.arrival_s for p in log.passengers
                      if p.board_s is not None])
    unserved = sum(1 for p in log.passengers if p.board_s is None)
    if len(waits) == 0:
        return {"mean_s": math.nan, "median_s": math.nan, "p95_s": math.nan,
                "count": 0, "unserved": unserved}
    return {
        "mean_s": float(waits.mean()),
        "median_s": float(np.median(waits)),
        "p95_s": float(np.percentile(waits, 95)),
        "count": int(len(waits)),
        "unserved": unserved,
    }


def timespace_points(log: EventLog, bus: int) -> list[tuple[float, float]]:
    """Piecewise-linear trajectory of one bus: (time s, position m)."""
    if bus not in log.trajectories:
        raise ValueError(f"bus: no bus {bus!r} in this log")
    return list(log.trajectories[bus])


def recharge_gaps(log: EventLog) -> list[tuple[float, float]]:
    """(start, end) pairs of stationary recharging intervals."""
    starts = {}
    gaps = []
    for ev in log.events:
        if ev.event == "recharge_start":
            starts[ev.bus] = ev.time_s
        elif ev.event == "recharge_end":
            gaps.append((starts.pop(ev.bus), ev.time_s))
    return sorted(gaps)


def charging_pod_ledger(log: EventLog, pod: int) -> list[dict]:
    """Chronological detach/attach records of one pod under mobile
    charging: stop, time, battery level, and the charging window for
    attaches.  This is the raw material for checking the stop-to-stop
    energy recursion against the simulation."""
    rows = []
    for ev in log.events:
        if ev.pod != pod or ev.event not in ("pod_detach", "pod_attach"):
            continue
        fields = dict(item.split("=") for item in ev.detail.split(";") if item)
        if "level" not in fields:       # depot logs carry no pod batteries
            continue
        rows.append({
            "kind": ev.event,
            "time_s": ev.time_s,
            "stop": ev.stop,
            "bus": ev.bus,
            "level": float(fields["level"]),
            "window_s": float(fields["window"]) if "window" in fields else None,
        })
    return rows


def check_invariants(log: EventLog) -> list[str]:
    """Conservation, capacity, battery and ordering checks; empty list
    means the log is clean."""
    cfg = log.config
    problems = []
    times = [ev.time_s for ev in log.events]
    if any(b < a for a, b in zip(times[:-1], times[1:])):
        problems.append("event times not sorted")
    for p in log.passengers:
        if p.board_s is not None and p.board_s < p.arrival_s - 1e-9:
            problems.append(f"pax {p.pax_id} boarded before arriving")
        if p.alight_s is not None and (p.board_s is None
                                       or p.alight_s < p.board_s - 1e-9):
            problems.append(f"pax {p.pax_id} alighted without riding")
    boarded = sum(1 for p in log.passengers if p.board_s is not None)
    alighted = sum(1 for p in log.passengers if p.alight_s is not None)
    onboard = sum(1 for p in log.passengers
                  if p.board_s is not None and p.alight_s is None)
    if boarded != alighted + onboard:
        problems.append("passenger conservation violated")

    load = {}
    for ev in log.events:
        if ev.event == "board":
            load[ev.bus] = load.get(ev.bus, 0) + 1
        elif ev.event == "alight":
            load[ev.bus] = load.get(ev.bus, 0) - 1
        if ev.event in ("board", "alight"):
            if load[ev.bus] > cfg.pods_per_bus * cfg.service.pod_capacity:
                problems.append(f"bus {ev.bus} over capacity at {ev.time_s:.1f}s")
            if load[ev.bus] < 0:
                problems.append(f"bus {ev.bus} negative load at {ev.time_s:.1f}s")
        if ev.event == "pod_attach" and ev.pax is not None:
            if ev.pax > cfg.service.pod_capacity:
                problems.append(f"pod {ev.pod} boarded over capacity")
        for key in ("level", "batt"):
            if f"{key}=" in ev.detail:
                value = float(dict(item.split("=") for item in
                                   ev.detail.split(";") if item)[key])
                cap = cfg.pod_battery if key == "level" else cfg.battery
                if value < -1e-6 or value > cap + 1e-6:
                    problems.append(
                        f"{key} {value:.3f} out of [0, {cap:.1f}] at {ev.time_s:.1f}s")
    return problems


# ---------------------------------------------------------------------------
# exports
# ---------------------------------------------------------------------------

def write_events_csv(log: EventLog, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("time_s", "event", "bus", "pod", "stop", "pax", "detail"))
        for ev in log.events:
            w.writerow((f"{ev.time_s:.3f}", ev.event,
                        "" if ev.bus is None else ev.bus,
                        "" if ev.pod is None else ev.pod,
                        "" if ev.stop is None else ev.stop,
                        "" if ev.pax is None else ev.pax,
                        ev.detail))


def write_trajectories_csv(log: EventLog, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("bus", "time_s", "pos_m"))
        for bus in log.bus_ids():
            for t, pos in log.trajectories[bus]:
                w.writerow((bus, f"{t:.3f}", f"{pos:.3f}"))
