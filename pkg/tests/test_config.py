import json
import math

import pytest

from lorasat.config import (
    ConfigError,
    GroundDevice,
    RadioConfig,
    dump_scenario,
    load_scenario,
    preset_scenario,
    scenario_from_dict,
    scenario_to_dict,
)


def test_default_radio_derived_quantities():
    r = RadioConfig(SF=7)
    assert r.M == 128
    assert r.N == 128
    assert r.Ts == pytest.approx(128 / 250e3)
    assert r.f_min == 868e6 - 125e3
    assert r.chirp_rate == pytest.approx(250e3**2 / 128)


def test_downsampled_radio():
    r = RadioConfig(SF=9, s_exp=2)
    assert r.N == 128
    assert r.Td == pytest.approx(4 / 250e3)


@pytest.mark.parametrize("kw", [{"SF": 4}, {"SF": 13}, {"SF": 7.5}, {"B": 0}, {"SF": 7, "s_exp": 8},
                                {"f_c": 100e3}])
def test_radio_rejects_bad_values(kw):
    with pytest.raises(ConfigError):
        RadioConfig(**kw)


def test_elevation_ordering_enforced():
    with pytest.raises(ConfigError):
        GroundDevice(theta_c_deg=40, theta_max_deg=50)


def test_device_B_central_time_is_derived(scenario):
    assert math.isfinite(scenario.device_B.t_cv)
    assert scenario.device_B.t_cv > scenario.device_A.t_cv


def test_json_round_trip(tmp_path, scenario):
    p = tmp_path / "s.json"
    dump_scenario(scenario, p)
    again = load_scenario(p)
    assert again == scenario
    assert scenario_to_dict(again) == json.loads(p.read_text())


def test_partial_config_takes_defaults():
    s = scenario_from_dict({"orbit": {"H": 500e3}})
    assert s.orbit.H == 500e3
    assert s.orbit.inclination_deg == preset_scenario().orbit.inclination_deg


def test_unknown_field_rejected():
    with pytest.raises(ConfigError):
        scenario_from_dict({"orbit": {"altitude": 1}})


def test_malformed_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ConfigError):
        load_scenario(p)


def test_unknown_preset():
    with pytest.raises(ConfigError):
        preset_scenario("nope")
