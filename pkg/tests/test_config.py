"""Configuration parsing, defaults and the environment fallback."""

import pytest

from slambus import EnergyParameters, ServiceParameters
from slambus.config import (ConfigError, load_config, parse_config,
                            service_parameters, demand_statistics,
                            energy_parameters, sim_config,
                            traditional_parameters)


def test_packaged_defaults_match_dataclass_defaults():
    cfg = load_config()
    assert service_parameters(cfg) == ServiceParameters()
    assert energy_parameters(cfg) == EnergyParameters()
    st = demand_statistics(cfg)
    assert (st.peak_flow_share, st.peak_load_share) == (0.1, 0.4)
    tp = traditional_parameters(cfg)
    assert tp.seat_cost == 0.25


def test_override_file(tmp_path):
    path = tmp_path / "site.cfg"
    path.write_text("wait_value = 6.0\n# comment line\n\npod_capacity = 20\n")
    cfg = load_config(str(path))
    p = service_parameters(cfg)
    assert p.wait_value == 6.0
    assert p.pod_capacity == 20.0
    assert p.cycle_time == 0.4          # untouched keys keep defaults


def test_environment_fallback(tmp_path, monkeypatch):
    path = tmp_path / "env.cfg"
    path.write_text("sim_seed = 99\n")
    monkeypatch.setenv("SLAM_CONFIG", str(path))
    cfg = load_config()
    assert sim_config(cfg).seed == 99
    # an explicit path wins over the environment
    other = tmp_path / "other.cfg"
    other.write_text("sim_seed = 5\n")
    assert sim_config(load_config(str(other))).seed == 5


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ConfigError, match=r"site\.cfg:2.*unknown key"):
        parse_config("wait_value = 4\nbogus_key = 1\n", "site.cfg")
    with pytest.raises(ConfigError, match=r":1.*expected 'key = value'"):
        parse_config("what is this\n", "x")
    with pytest.raises(ConfigError, match=r":3.*bad value"):
        parse_config("\n\nstop_count = twenty\n", "x")


def test_missing_file_is_a_config_error():
    with pytest.raises(ConfigError, match="cannot read"):
        load_config("/nonexistent/nowhere.cfg")


def test_sim_config_wiring():
    cfg = load_config()
    sc = sim_config(cfg, strategy="mobile", seed=3)
    assert sc.strategy == "mobile"
    assert sc.seed == 3
    assert sc.n_buses == 3 and sc.n_stops == 9
    assert sc.full_stops == frozenset({1, 5})
    assert sc.rates is not None
