"""Demand sweeps: the optimal design as a function of ridership.

Produces the data behind frequency/pods/average-cost curves and locates
stage boundaries empirically, cross-checking the closed-form thresholds.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from . import charging, design
from .demand import DemandStatistics
from .design import Design
from .parameters import EnergyParameters, ServiceParameters

CSV_HEADER = ("X", "f_star", "P_star", "P_int", "stage", "cost_wait",
              "cost_iv", "cost_op", "cost_total", "avg_cost", "feasible",
              "reason")


@dataclass(frozen=True)
class SweepRow:
    demand: float
    frequency: float
    pods: float
    pods_int: int | None
    stage: str
    cost_wait: float
    cost_invehicle: float
    cost_operator: float
    cost_total: float
    avg_cost: float
    feasible: bool
    reason: str | None


def _optimize(params, stats, strategy, energy, demand) -> Design:
    if strategy == "core":
        return design.optimize_core(params, stats, demand)
    if strategy == "depot":
        return charging.optimize_depot(params, stats, energy, demand)
    if strategy == "mobile":
        return charging.optimize_mobile(params, stats, energy, demand)
    raise ValueError(f"strategy: unknown strategy {strategy!r}")


def _row(demand: float, d: Design) -> SweepRow:
    stage = d.stage.stage.value if d.stage is not None else ""
    reason = d.stage.reason if d.stage is not None else None
    return SweepRow(demand, d.frequency, d.pods, d.pods_int, stage,
                    d.cost_wait, d.cost_invehicle, d.cost_operator,
                    d.cost_total, d.avg_cost, d.feasible, reason)


def demand_sweep(params: ServiceParameters, stats: DemandStatistics,
                 lo: float, hi: float, steps: int = 500,
                 strategy: str = "core",
                 energy: EnergyParameters | None = None,
                 spacing: str = "linear") -> list[SweepRow]:
    """One optimized design per demand level on a linear or log grid.

    A single-step sweep degenerates to the lone optimization at ``lo``.
    """
    if lo <= 0 or hi < lo:
        raise ValueError("sweep range: need 0 < lo <= hi")
    if steps < 1:
        raise ValueError("steps: need at least one")
    if spacing == "linear":
        grid = np.linspace(lo, hi, steps)
    elif spacing == "log":
        grid = np.geomspace(lo, hi, steps)
    else:
        raise ValueError(f"spacing: unknown spacing {spacing!r}")
    return [_row(float(x), _optimize(params, stats, strategy, energy, float(x)))
            for x in grid]


def detect_stage_boundaries(rows: list[SweepRow]
                            ) -> list[tuple[float, str, str]]:
    """Midpoints between consecutive rows whose stage labels differ."""
    out = []
    for a, b in zip(rows[:-1], rows[1:]):
        if a.stage != b.stage:
            out.append(((a.demand + b.demand) / 2.0, a.stage, b.stage))
    return out


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return f"{value:.6g}"
    return str(value)


def write_sweep_csv(rows: list[SweepRow], path) -> None:
    """Six significant digits, plain decimal points, empty cells for
    missing values."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow([_fmt(r.demand), _fmt(r.frequency), _fmt(r.pods),
                        _fmt(r.pods_int), r.stage, _fmt(r.cost_wait),
                        _fmt(r.cost_invehicle), _fmt(r.cost_operator),
                        _fmt(r.cost_total), _fmt(r.avg_cost),
                        _fmt(r.feasible), _fmt(r.reason)])
