"""Closed-form service design for stop-less modular bus lines.

The design problem picks a service frequency f (buses/h) and a pod count
P per bus minimizing user waiting cost, user in-vehicle cost and
operator cost, subject to:

* a minimum headway (two pod services plus a swap must fit between buses),
* a maximum headway (one boarding pod must absorb the busiest stop),
* bus capacity (the non-boarding pods must hold the peak load),
* at least two pods per bus, and
* for in-motion charging, an energy budget tying the headway to the
  longest segment.

Because the objective is convex in f for fixed P and increasing in P,
the optimum sits on a small set of closed-form candidates: the interior
optimum of the two-pod problem, the interior optimum of the
capacity-coupled problem, and their projections onto the active bounds.
Both candidates are always evaluated and the cheaper feasible one wins;
the stage label names whichever expression ends up binding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .demand import DemandStatistics
from .parameters import EnergyParameters, ServiceParameters

_REL_TOL = 1e-9

REASON_HEADWAY = "headway_window_empty"
REASON_ENERGY = "energy_window_empty"

STRATEGIES = ("core", "depot", "mobile")


class Stage(str, Enum):
    """Operating regimes met as demand grows.

    IC    idle capacity: frequency set by the cost trade-off alone.
    FSB   full single boarding pod: frequency grows linearly to keep a
          two-pod bus sufficient.
    FLB   full-length bus: pods are added as frequency keeps growing.
    FLB2  full-length bus with the boarding pod saturated: frequency
          grows linearly again at fixed pod count.
    MFH   minimum feasible headway: frequency pinned at its cap, buses
          only get longer.
    ELS   energy-limited service: the charging budget forces the
          frequency down as buses get longer.
    """

    IC = "IC"
    FSB = "FSB"
    FLB = "FLB"
    FLB2 = "FLB2"
    MFH = "MFH"
    ELS = "ELS"
    INFEASIBLE = "INFEASIBLE"


@dataclass(frozen=True)
class StageLabel:
    """A stage, plus the cause and threshold when infeasible."""

    stage: Stage
    reason: str | None = None
    threshold: float | None = None

    def __post_init__(self) -> None:
        if self.stage is Stage.INFEASIBLE:
            if self.reason not in (REASON_HEADWAY, REASON_ENERGY):
                raise ValueError("infeasible label needs exactly one known reason")
        elif self.reason is not None:
            raise ValueError("feasible stages carry no reason")

    @property
    def feasible(self) -> bool:
        return self.stage is not Stage.INFEASIBLE

    def __str__(self) -> str:
        if self.stage is Stage.INFEASIBLE:
            return f"INFEASIBLE({self.reason})"
        return self.stage.value


@dataclass(frozen=True)
class FeasibilityCheck:
    """Result of the static headway-window test."""

    ok: bool
    demand_limit: float     # largest demand with a non-empty frequency window
    margin: float           # demand_limit - X; negative when violated
    label: StageLabel | None


@dataclass(frozen=True)
class Design:
    """A (frequency, pods) service design with its cost breakdown.

    ``pods`` is real valued; ``pods_int``/``frequency_int`` give the
    cheaper feasible neighbouring integer design when one exists.
    Infeasible designs carry NaN numerics and an INFEASIBLE stage.
    """

    frequency: float
    pods: float
    stage: StageLabel | None
    cost_wait: float
    cost_invehicle: float
    cost_operator: float
    cost_total: float
    avg_cost: float
    pods_int: int | None = None
    frequency_int: float | None = None

    @property
    def feasible(self) -> bool:
        return self.stage is None or self.stage.feasible


# ---------------------------------------------------------------------------
# strategy context
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StrategyContext:
    """Everything the optimizer needs, resolved for one charging strategy."""

    params: ServiceParameters
    stats: DemandStatistics
    strategy: str
    cycle_time: float
    pod_cost: float
    energy: EnergyParameters | None

    @property
    def mobile(self) -> bool:
        return self.strategy == "mobile"

    # -- caps ---------------------------------------------------------------

    def pair_energy_cap(self) -> float:
        """Frequency cap from the energy budget of a two-pod bus."""
        e = self.energy
        assert e is not None
        return e.charge_rate / (e.discharge_rate * e.max_segment_time
                                * (1.0 + e.efficiency))

    def energy_cap_at(self, pods: float) -> float:
        """Frequency cap from the energy budget at a given pod count."""
        e = self.energy
        assert e is not None
        return e.charge_rate / (e.discharge_rate * e.max_segment_time
                                * (pods - 1.0 + e.efficiency))

    def declining_energy_cap(self, demand: float) -> float:
        """Energy frequency cap with the pod count eliminated through the
        capacity constraint; decreases linearly with demand."""
        e = self.energy
        assert e is not None
        a = e.charge_rate / (e.discharge_rate * e.max_segment_time * e.efficiency)
        s = self.stats.peak_load_share / (self.params.pod_capacity * e.efficiency)
        return a - s * demand

    def energy_infeasible_demand(self) -> float:
        """Demand beyond which no frequency satisfies both the energy
        budget and the busiest-stop bound."""
        e = self.energy
        assert e is not None
        st = self.stats
        denom = e.discharge_rate * e.max_segment_time * (
            st.peak_load_share + st.peak_flow_share * e.efficiency)
        return e.charge_rate * self.params.pod_capacity / denom

    def energy_cap_meets_headway_cap(self) -> float:
        """Demand at which the declining energy cap falls to the
        frequency cap; the onset of the energy-limited stage when it
        precedes infeasibility."""
        e = self.energy
        assert e is not None
        a = e.charge_rate / (e.discharge_rate * e.max_segment_time * e.efficiency)
        s = self.stats.peak_load_share / (self.params.pod_capacity * e.efficiency)
        if s == 0:
            return math.inf
        return (a - self.params.max_frequency) / s

    # -- demand thresholds ----------------------------------------------------

    def case_switch_demand(self) -> float:
        """Demand above which the unconstrained pod count exceeds two."""
        st, p = self.stats, self.params
        if st.peak_load_share == 0:
            return math.inf
        return (p.wait_value * p.pod_capacity ** 2
                / (2.0 * st.peak_load_share ** 2 * self.cycle_time * self.pod_cost))

    def headway_window_limit(self) -> float:
        """Largest demand whose busiest stop still fits under the
        frequency cap."""
        phi = self.stats.peak_flow_share
        if phi == 0:
            return math.inf
        return self.params.max_frequency * self.params.pod_capacity / phi


def strategy_context(params: ServiceParameters, stats: DemandStatistics,
                     strategy: str = "core",
                     energy: EnergyParameters | None = None) -> StrategyContext:
    """Resolve cycle time, pod cost and energy caps for a strategy."""
    if strategy not in STRATEGIES:
        raise ValueError(f"strategy: unknown strategy {strategy!r}")
    if strategy == "core":
        return StrategyContext(params, stats, strategy, params.cycle_time,
                               params.pod_cost, None)
    if energy is None:
        raise ValueError(f"strategy {strategy!r} needs energy parameters")
    if strategy == "depot":
        # the loop grows by the time spent replenishing one loop's consumption
        t_c = params.cycle_time * (1.0 + energy.discharge_rate
                                   / (energy.efficiency * energy.charge_rate))
        return StrategyContext(params, stats, strategy, t_c, params.pod_cost, energy)
    if energy.mobile_pod_cost <= params.pod_cost:
        raise ValueError("mobile_pod_cost: must exceed the plain pod cost")
    return StrategyContext(params, stats, strategy, params.cycle_time,
                           energy.mobile_pod_cost, energy)


# ---------------------------------------------------------------------------
# cost and feasibility
# ---------------------------------------------------------------------------

def evaluate_cost(params: ServiceParameters, demand: float, frequency: float,
                  pods: float, cycle_time: float | None = None,
                  pod_cost: float | None = None) -> Design:
    """Cost breakdown of an arbitrary design, no optimization.

    Waiting cost is half a headway per rider, in-vehicle cost a
    ``trip_ratio`` share of the cycle per rider, and operator cost the
    fleet of pods in motion plus one standby pod per stop.
    """
    if frequency <= 0:
        raise ValueError("frequency: must be positive")
    if pods < 2:
        raise ValueError("pods: a bus needs at least two pods")
    if demand < 0:
        raise ValueError("demand: must be non-negative")
    t_c = params.cycle_time if cycle_time is None else cycle_time
    gamma = params.pod_cost if pod_cost is None else pod_cost
    wait = params.wait_value * demand / (2.0 * frequency)
    invehicle = params.invehicle_value * params.trip_ratio * t_c * demand
    operator = (frequency * t_c * pods + params.stop_count) * gamma
    total = wait + invehicle + operator
    avg = total / demand if demand > 0 else math.nan
    return Design(frequency, pods, None, wait, invehicle, operator, total, avg)


def check_feasibility(params: ServiceParameters, stats: DemandStatistics,
                      demand: float) -> FeasibilityCheck:
    """Static test that the busiest stop fits under the frequency cap.

    Holds for every charging strategy; energy budgets can only shrink
    the window further.
    """
    if demand < 0:
        raise ValueError("demand: must be non-negative")
    phi = stats.peak_flow_share
    limit = math.inf if phi == 0 else params.max_frequency * params.pod_capacity / phi
    ok = demand <= limit * (1.0 + _REL_TOL)
    label = None if ok else StageLabel(Stage.INFEASIBLE, REASON_HEADWAY, limit)
    return FeasibilityCheck(ok, limit, limit - demand, label)


def _violations(ctx: StrategyContext, demand: float, frequency: float,
                pods: float) -> list[str]:
    """Names of violated constraints, empty when the design is valid."""
    p, st = ctx.params, ctx.stats
    out = []
    if frequency <= 0:
        return ["min_headway"]
    if frequency > p.max_frequency * (1.0 + _REL_TOL):
        out.append("min_headway")
    if st.peak_flow_share * demand > frequency * p.pod_capacity * (1.0 + _REL_TOL):
        out.append("max_headway")
    if pods < 2.0 - _REL_TOL:
        out.append("min_pods")
    elif st.peak_load_share * demand > frequency * (pods - 1.0) * p.pod_capacity * (1.0 + _REL_TOL):
        out.append("capacity")
    if ctx.mobile:
        e = ctx.energy
        assert e is not None
        budget = e.charge_rate / (e.discharge_rate * e.max_segment_time)
        if frequency * (pods - 1.0 + e.efficiency) > budget * (1.0 + _REL_TOL):
            out.append("energy")
    return out


def _strategy_feasible(ctx: StrategyContext, demand: float) -> bool:
    p, st = ctx.params, ctx.stats
    cap = p.max_frequency
    floor = demand * st.peak_flow_share / p.pod_capacity
    if floor > cap * (1.0 + _REL_TOL):
        return False
    if not ctx.mobile:
        return True
    # capacity-coupled branch: pods grow with demand, energy cap declines
    if floor <= ctx.declining_energy_cap(demand) * (1.0 + _REL_TOL):
        return True
    # two-pod branch: needs the peak load to fit in one pod under the caps
    two_pod_cap = min(cap, ctx.pair_energy_cap())
    need = demand * max(st.peak_load_share, st.peak_flow_share) / p.pod_capacity
    return need <= two_pod_cap * (1.0 + _REL_TOL)


def _infeasible_label(ctx: StrategyContext, demand: float) -> StageLabel:
    if ctx.mobile:
        energy_limit = ctx.energy_infeasible_demand()
        if demand >= energy_limit * (1.0 - _REL_TOL):
            return StageLabel(Stage.INFEASIBLE, REASON_ENERGY, energy_limit)
    headway_limit = ctx.headway_window_limit()
    if demand > headway_limit:
        return StageLabel(Stage.INFEASIBLE, REASON_HEADWAY, headway_limit)
    # residual mobile case: the energy window closed early
    return StageLabel(Stage.INFEASIBLE, REASON_ENERGY,
                      ctx.energy_infeasible_demand())


# ---------------------------------------------------------------------------
# closed-form candidates
# ---------------------------------------------------------------------------

def _capacity_pods(ctx: StrategyContext, demand: float, frequency: float) -> float:
    return max(2.0, demand * ctx.stats.peak_load_share
               / (frequency * ctx.params.pod_capacity) + 1.0)


def _two_pod_candidate(ctx: StrategyContext, demand: float) -> tuple[float, float] | None:
    """Optimum under the assumption that two pods suffice."""
    p, st = ctx.params, ctx.stats
    interior = math.sqrt(p.wait_value * demand / (4.0 * ctx.cycle_time * ctx.pod_cost))
    floor = demand * max(st.peak_load_share, st.peak_flow_share) / p.pod_capacity
    cap = p.max_frequency
    if ctx.mobile:
        cap = min(cap, ctx.pair_energy_cap())
    f = min(cap, max(interior, floor))
    if f <= 0:
        return None
    pods = _capacity_pods(ctx, demand, f)
    if ctx.mobile and pods > 2.0 and f > ctx.energy_cap_at(pods):
        # capacity pushed past two pods; fall back to the coupled energy cap
        f = min(f, ctx.declining_energy_cap(demand))
        if f <= 0:
            return None
        pods = _capacity_pods(ctx, demand, f)
    return f, pods


def _coupled_candidate(ctx: StrategyContext, demand: float) -> tuple[float, float] | None:
    """Optimum with the pod count tied to capacity at equality."""
    p, st = ctx.params, ctx.stats
    interior = math.sqrt(p.wait_value * demand / (2.0 * ctx.cycle_time * ctx.pod_cost))
    floor = demand * st.peak_flow_share / p.pod_capacity
    cap = p.max_frequency
    if ctx.mobile:
        cap = min(cap, ctx.declining_energy_cap(demand))
    f = min(cap, max(interior, floor))
    if f <= 0:
        return None
    return f, _capacity_pods(ctx, demand, f)


def _optimize(ctx: StrategyContext, demand: float) -> Design:
    if demand <= 0:
        raise ValueError("demand: must be positive")
    if not _strategy_feasible(ctx, demand):
        label = _infeasible_label(ctx, demand)
        nan = math.nan
        return Design(nan, nan, label, nan, nan, nan, nan, nan)
    best: Design | None = None
    for cand in (_two_pod_candidate(ctx, demand), _coupled_candidate(ctx, demand)):
        if cand is None:
            continue
        f, pods = cand
        if _violations(ctx, demand, f, pods):
            continue
        d = evaluate_cost(ctx.params, demand, f, pods, ctx.cycle_time, ctx.pod_cost)
        if best is None or d.cost_total < best.cost_total:
            best = d
    if best is None:
        label = _infeasible_label(ctx, demand)
        nan = math.nan
        return Design(nan, nan, label, nan, nan, nan, nan, nan)
    label = classify_stage(ctx.params, ctx.stats, demand, ctx.strategy, ctx.energy)
    rounded = integer_design(ctx, demand, best.pods)
    return Design(best.frequency, best.pods, label, best.cost_wait,
                  best.cost_invehicle, best.cost_operator, best.cost_total,
                  best.avg_cost,
                  pods_int=None if rounded is None else int(round(rounded.pods)),
                  frequency_int=None if rounded is None else rounded.frequency)


def integer_design(ctx: StrategyContext, demand: float,
                   pods_star: float) -> Design | None:
    """Cheapest feasible design among the two integer pod counts
    bracketing ``pods_star``, with the frequency re-optimized for each.

    The cost is convex in the frequency at fixed pods, so the optimum is
    the interior stationary point clamped to the feasible window.  Near
    the energy infeasibility edge no integer neighbour may fit; then
    ``None`` is returned.
    """
    p, st = ctx.params, ctx.stats
    options = sorted({max(2, math.floor(pods_star)), math.ceil(pods_star)})
    best: Design | None = None
    for pods in options:
        lo = demand * st.peak_flow_share / p.pod_capacity
        lo = max(lo, demand * st.peak_load_share / ((pods - 1.0) * p.pod_capacity))
        hi = p.max_frequency
        if ctx.mobile:
            hi = min(hi, ctx.energy_cap_at(float(pods)))
        if lo > hi * (1.0 + _REL_TOL):
            continue
        interior = math.sqrt(p.wait_value * demand
                             / (2.0 * ctx.cycle_time * ctx.pod_cost * pods))
        f = min(max(interior, lo), hi)
        if f <= 0:
            continue
        d = evaluate_cost(ctx.params, demand, f, float(pods),
                          ctx.cycle_time, ctx.pod_cost)
        if best is None or d.cost_total < best.cost_total:
            best = d
    return best


def optimize_core(params: ServiceParameters, stats: DemandStatistics,
                  demand: float) -> Design:
    """Optimal design without any charging overhead."""
    return _optimize(strategy_context(params, stats, "core"), demand)


# ---------------------------------------------------------------------------
# stage classification
# ---------------------------------------------------------------------------

def classify_stage(params: ServiceParameters, stats: DemandStatistics,
                   demand: float, strategy: str = "core",
                   energy: EnergyParameters | None = None) -> StageLabel:
    """Operating stage at a demand level, from the closed forms alone.

    The label names whichever expression produces the optimal frequency:
    an interior square-root optimum (IC or FLB), a demand-proportional
    bound (FSB or FLB2), the headway cap (MFH) or an energy cap (ELS).
    Ties at a boundary go to the lower-demand stage.
    """
    ctx = strategy_context(params, stats, strategy, energy)
    if demand <= 0:
        raise ValueError("demand: must be positive")
    if not _strategy_feasible(ctx, demand):
        return _infeasible_label(ctx, demand)
    p, st = ctx.params, ctx.stats
    cap = p.max_frequency
    if demand <= ctx.case_switch_demand():
        interior = math.sqrt(p.wait_value * demand
                             / (4.0 * ctx.cycle_time * ctx.pod_cost))
        floor = demand * max(st.peak_load_share, st.peak_flow_share) / p.pod_capacity
        inner = max(interior, floor)
        inner_stage = Stage.IC if interior >= floor else Stage.FSB
        energy_cap = ctx.pair_energy_cap() if ctx.mobile else math.inf
    else:
        interior = math.sqrt(p.wait_value * demand
                             / (2.0 * ctx.cycle_time * ctx.pod_cost))
        floor = demand * st.peak_flow_share / p.pod_capacity
        inner = max(interior, floor)
        inner_stage = Stage.FLB if interior >= floor else Stage.FLB2
        energy_cap = ctx.declining_energy_cap(demand) if ctx.mobile else math.inf
    if inner <= min(cap, energy_cap):
        return StageLabel(inner_stage)
    if cap <= energy_cap:
        return StageLabel(Stage.MFH)
    return StageLabel(Stage.ELS)


def stage_intervals(params: ServiceParameters, stats: DemandStatistics,
                    strategy: str = "core",
                    energy: EnergyParameters | None = None
                    ) -> list[tuple[StageLabel, float, float]]:
    """Partition of the demand axis into stages, boundaries in closed form.

    Every possible boundary is a crossing of two of the closed-form
    expressions; all crossings are collected and each resulting interval
    is labelled through ``classify_stage``, so the list is exact up to
    floating point.
    """
    ctx = strategy_context(params, stats, strategy, energy)
    p, st = ctx.params, ctx.stats
    cap = p.max_frequency
    phi, rho = st.peak_flow_share, st.peak_load_share
    m = max(phi, rho)

    def sqrt_meets_cap(k: float, c: float) -> float:
        # sqrt(wait_value * X / (k * t_c * cost)) == c
        return c * c * k * ctx.cycle_time * ctx.pod_cost / p.wait_value

    candidates: set[float] = {ctx.case_switch_demand()}
    for c in (cap,):
        candidates.add(sqrt_meets_cap(4.0, c))
        candidates.add(sqrt_meets_cap(2.0, c))
    if m > 0:
        candidates.add(p.wait_value * p.pod_capacity ** 2
                       / (4.0 * ctx.cycle_time * ctx.pod_cost * m * m))
        candidates.add(cap * p.pod_capacity / m)
    if phi > 0:
        candidates.add(p.wait_value * p.pod_capacity ** 2
                       / (2.0 * ctx.cycle_time * ctx.pod_cost * phi * phi))
        candidates.add(ctx.headway_window_limit())
    if ctx.mobile:
        e = ctx.energy
        assert e is not None
        e2 = ctx.pair_energy_cap()
        candidates.add(sqrt_meets_cap(4.0, e2))
        if m > 0:
            candidates.add(e2 * p.pod_capacity / m)
        if phi > 0:
            candidates.add(e2 * p.pod_capacity / phi)
        candidates.add(ctx.energy_infeasible_demand())
        candidates.add(ctx.energy_cap_meets_headway_cap())
        # crossing of the coupled square root with the declining energy cap
        a = e.charge_rate / (e.discharge_rate * e.max_segment_time * e.efficiency)
        s = rho / (p.pod_capacity * e.efficiency)
        k = p.wait_value / (2.0 * ctx.cycle_time * ctx.pod_cost)
        if s > 0:
            disc = (2.0 * a * s + k) ** 2 - 4.0 * s * s * a * a
            if disc >= 0:
                root = (2.0 * a * s + k - math.sqrt(disc)) / (2.0 * s * s)
                candidates.add(root)

    cuts = sorted(x for x in candidates if math.isfinite(x) and x > 0)
    edges = [0.0] + cuts + [math.inf]
    intervals: list[tuple[StageLabel, float, float]] = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi <= lo * (1.0 + 1e-12):
            continue
        if math.isinf(hi):
            probe = max(lo * 1.5, lo + 1.0)
        elif lo == 0.0:
            probe = hi / 2.0
        else:
            probe = math.sqrt(lo * hi)
        label = classify_stage(params, stats, probe, strategy, energy)
        if intervals and intervals[-1][0] == label:
            prev = intervals.pop()
            intervals.append((label, prev[1], hi))
        else:
            intervals.append((label, lo, hi))
    return intervals


def stage_thresholds(params: ServiceParameters, stats: DemandStatistics,
                     strategy: str = "core",
                     energy: EnergyParameters | None = None
                     ) -> list[tuple[str, float | None]]:
    """Ordered stage boundaries; absent stages are flagged with ``None``.

    Transitions between feasible stages come first, then an entry per
    stage that never appears, then the feasibility limits.
    """
    intervals = stage_intervals(params, stats, strategy, energy)
    out: list[tuple[str, float | None]] = []
    seen: set[Stage] = set()
    for (label, lo, hi), (nxt, _, _) in zip(intervals[:-1], intervals[1:]):
        seen.add(label.stage)
        if label.feasible and nxt.feasible:
            out.append((f"{label.stage.value}->{nxt.stage.value}", hi))
    if intervals:
        seen.add(intervals[-1][0].stage)
    expected = [Stage.FSB, Stage.FLB, Stage.FLB2, Stage.MFH]
    if strategy == "mobile":
        expected.append(Stage.ELS)
    for stage in expected:
        if stage not in seen:
            out.append((stage.value, None))
    ctx = strategy_context(params, stats, strategy, energy)
    out.append(("headway_window_limit", ctx.headway_window_limit()))
    if strategy == "mobile":
        out.append(("energy_window_limit", ctx.energy_infeasible_demand()))
    return out
