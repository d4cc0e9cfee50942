"""Flat key=value configuration files.

One file holds every tunable: service constants, demand-profile peaks,
energy ratings, baseline cost coefficients and the simulation block.
Values the file omits fall back to the packaged defaults.  Lookup order
for the file itself: explicit path, then the SLAM_CONFIG environment
variable, then the packaged default.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources

from .demand import DemandStatistics
from .parameters import EnergyParameters, ServiceParameters, TraditionalParameters
from .sim import SimConfig


class ConfigError(ValueError):
    """A configuration file problem, carrying the offending key."""


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(part.strip()) for part in text.split(",") if part.strip())


# key -> parser; every key must appear in the packaged default file
_SCHEMA = {
    "pod_capacity": float,
    "board_time_s": float,
    "swap_time_s": float,
    "cycle_time_h": float,
    "stop_count": int,
    "pod_cost": float,
    "wait_value": float,
    "invehicle_value": float,
    "trip_ratio": float,
    "peak_flow_share": float,
    "peak_load_share": float,
    "charge_rate_kw": float,
    "discharge_rate_kw": float,
    "efficiency": float,
    "battery_hours": float,
    "segment_time_h": float,
    "mobile_pod_cost": float,
    "base_bus_cost": float,
    "seat_cost": float,
    "sim_buses": int,
    "sim_stops": int,
    "sim_full_stops": _int_list,
    "sim_horizon_h": float,
    "sim_pods": int,
    "sim_demand": float,
    "sim_spacing_m": float,
    "sim_seed": int,
}


@dataclass(frozen=True)
class Config:
    values: dict

    def __getitem__(self, key):
        return self.values[key]


def parse_config(text: str, source: str = "<config>") -> dict:
    """Parse ``key = value`` lines; '#' starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _SCHEMA:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _SCHEMA[key](value)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: {key}: bad value {value!r}") from exc
    return out


def _default_text() -> str:
    return resources.files("slambus").joinpath("default.cfg").read_text()


def load_config(path: str | None = None) -> Config:
    """Merge the packaged defaults with an optional override file."""
    values = parse_config(_default_text(), source="default.cfg")
    if path is None:
        path = os.environ.get("SLAM_CONFIG") or None
    if path is not None:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
        values.update(parse_config(text, source=str(path)))
    missing = sorted(set(_SCHEMA) - set(values))
    if missing:
        raise ConfigError(f"default.cfg is missing keys: {', '.join(missing)}")
    return Config(values)


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def service_parameters(cfg: Config) -> ServiceParameters:
    v = cfg.values
    return ServiceParameters(
        pod_capacity=v["pod_capacity"],
        board_time=v["board_time_s"] / 3600.0,
        swap_time=v["swap_time_s"] / 3600.0,
        cycle_time=v["cycle_time_h"],
        stop_count=v["stop_count"],
        pod_cost=v["pod_cost"],
        wait_value=v["wait_value"],
        invehicle_value=v["invehicle_value"],
        trip_ratio=v["trip_ratio"],
    )


def demand_statistics(cfg: Config) -> DemandStatistics:
    return DemandStatistics.from_peaks(cfg["peak_flow_share"],
                                       cfg["peak_load_share"])


def energy_parameters(cfg: Config) -> EnergyParameters:
    v = cfg.values
    return EnergyParameters(
        charge_rate=v["charge_rate_kw"],
        discharge_rate=v["discharge_rate_kw"],
        efficiency=v["efficiency"],
        battery_hours=v["battery_hours"],
        segment_times=(v["segment_time_h"],) * v["stop_count"],
        mobile_pod_cost=v["mobile_pod_cost"],
    )


def traditional_parameters(cfg: Config) -> TraditionalParameters:
    v = cfg.values
    return TraditionalParameters(
        base_bus_cost=v["base_bus_cost"],
        seat_cost=v["seat_cost"],
        cycle_time=v["cycle_time_h"],
        board_time=v["board_time_s"] / 3600.0,
        wait_value=v["wait_value"],
        invehicle_value=v["invehicle_value"],
        trip_ratio=v["trip_ratio"],
    )


def sim_config(cfg: Config, strategy: str = "depot",
               seed: int | None = None) -> SimConfig:
    v = cfg.values
    return SimConfig(
        service=service_parameters(cfg),
        energy=energy_parameters(cfg),
        strategy=strategy,
        n_buses=v["sim_buses"],
        n_stops=v["sim_stops"],
        full_stops=frozenset(v["sim_full_stops"]),
        horizon=v["sim_horizon_h"],
        demand=v["sim_demand"],
        pods_per_bus=v["sim_pods"],
        segment_hours=v["segment_time_h"],
        spacing_m=v["sim_spacing_m"],
        seed=v["sim_seed"] if seed is None else seed,
    )
