"""Conventional fixed-size bus line, for comparison curves.

One vehicle class with an optimized seat capacity K, dwelling at every
stop: the cycle time grows with ridership as T + t*X/f because each
boarding consumes door time.  Operator cost is gamma0 per bus-hour plus
gamma1 per seat-hour.  Capacity is set so buses run exactly full on the
peak link, K = X*(l/L)/f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .parameters import TraditionalParameters


@dataclass(frozen=True)
class TraditionalDesign:
    frequency: float
    capacity: float          # seats per bus
    cycle_time: float        # hours, demand-dependent
    cost_wait: float
    cost_invehicle: float
    cost_operator: float
    cost_total: float
    avg_cost: float


def traditional_cost(tp: TraditionalParameters, demand: float,
                     frequency: float) -> TraditionalDesign:
    """Cost of a conventional line at a given frequency, seats set to
    run full on the peak link."""
    if frequency <= 0:
        raise ValueError("frequency: must be positive")
    if demand <= 0:
        raise ValueError("demand: must be positive")
    capacity = demand * tp.trip_ratio / frequency
    t_c = tp.cycle_time + tp.board_time * demand / frequency
    wait = tp.wait_value * demand / (2.0 * frequency)
    invehicle = tp.invehicle_value * tp.trip_ratio * t_c * demand
    operator = frequency * t_c * (tp.base_bus_cost + tp.seat_cost * capacity)
    total = wait + invehicle + operator
    return TraditionalDesign(frequency, capacity, t_c, wait, invehicle,
                             operator, total, total / demand)


def optimize_traditional(tp: TraditionalParameters,
                         demand: float) -> TraditionalDesign:
    """First-order optimal frequency of the conventional line.

    With seats eliminated through the full-bus rule the objective is
    convex in f and the stationary point is exact:
    f* = sqrt((pi_w*X/2 + (pi_v + gamma1)*(l/L)*t*X^2) / (T*gamma0)).
    """
    if demand <= 0:
        raise ValueError("demand: must be positive")
    num = (tp.wait_value * demand / 2.0
           + (tp.invehicle_value + tp.seat_cost) * tp.trip_ratio
           * tp.board_time * demand ** 2)
    f_star = math.sqrt(num / (tp.cycle_time * tp.base_bus_cost))
    return traditional_cost(tp, demand, f_star)


def capacity_limit(tp: TraditionalParameters) -> float:
    """Bus size the optimum approaches as demand grows without bound.

    For large X the frequency scales linearly in X, so seats per bus
    saturate at (l/L)*sqrt(T*gamma0 / ((l/L)*t*(pi_v + gamma1))).
    """
    return tp.trip_ratio * math.sqrt(
        tp.cycle_time * tp.base_bus_cost
        / (tp.trip_ratio * tp.board_time * (tp.invehicle_value + tp.seat_cost)))
