"""Design optimization toolkit for stop-less modular bus services.

A loop line is served by buses assembled from detachable pods: the
front pod swaps out at each stop to handle boarding while the bus keeps
moving.  This package computes cost-optimal service frequency and bus
length in closed form, classifies the operating stage as demand grows,
extends the design to depot and in-motion charging, validates every
formula against a brute-force oracle, and simulates the resulting
operation event by event.
"""

from .baseline import (TraditionalDesign, capacity_limit, optimize_traditional,
                       traditional_cost)
from .charging import (BatteryTrace, battery_trajectory, depot_cycle_time,
                       els_threshold, mci_threshold,
                       mobile_headway_energy_bound, optimize_depot,
                       optimize_mobile)
from .demand import (DemandError, DemandStatistics, DegenerateDemandError,
                     FullStopResult, MalformedODError, NegativeFlowError,
                     ODMatrix, SynthesisError, UpstreamFlowError,
                     compute_statistics, identify_full_stops, load_od_csv,
                     save_od_csv, synthesize_od, trip_ratio_from_od)
from .design import (Design, FeasibilityCheck, REASON_ENERGY, REASON_HEADWAY,
                     Stage, StageLabel, check_feasibility, classify_stage,
                     evaluate_cost, integer_design, optimize_core,
                     stage_intervals, stage_thresholds, strategy_context)
from .oracle import (CompareReport, OracleResult, compare,
                     constraint_violations, grid_search, random_scenario)
from .parameters import EnergyParameters, ServiceParameters, TraditionalParameters
from .sim import (EventLog, SimConfig, charging_pod_ledger, check_invariants,
                  recharge_gaps, run_simulation, timespace_points,
                  waiting_time_stats, write_events_csv, write_trajectories_csv)
from .sweep import (SweepRow, demand_sweep, detect_stage_boundaries,
                    write_sweep_csv)

__version__ = "0.1.0"

__all__ = [
    "BatteryTrace", "CompareReport", "DegenerateDemandError", "DemandError",
    "DemandStatistics", "Design", "EnergyParameters", "EventLog",
    "FeasibilityCheck", "FullStopResult", "MalformedODError",
    "NegativeFlowError", "ODMatrix", "OracleResult", "REASON_ENERGY",
    "REASON_HEADWAY", "ServiceParameters", "SimConfig", "Stage", "StageLabel",
    "SweepRow", "SynthesisError", "TraditionalDesign", "TraditionalParameters",
    "UpstreamFlowError", "battery_trajectory", "capacity_limit",
    "charging_pod_ledger", "check_feasibility", "check_invariants",
    "classify_stage", "compare", "compute_statistics", "constraint_violations",
    "demand_sweep", "depot_cycle_time", "detect_stage_boundaries",
    "els_threshold", "evaluate_cost", "grid_search", "identify_full_stops",
    "integer_design", "load_od_csv", "mci_threshold",
    "mobile_headway_energy_bound", "optimize_core", "optimize_depot",
    "optimize_mobile", "optimize_traditional", "random_scenario",
    "recharge_gaps", "run_simulation", "save_od_csv", "stage_intervals",
    "stage_thresholds", "strategy_context", "synthesize_od",
    "timespace_points", "traditional_cost", "trip_ratio_from_od",
    "waiting_time_stats", "write_events_csv", "write_sweep_csv",
    "write_trajectories_csv",
]
