import json
import math

import pytest

from jamguard.config import (
    ConfigurationError,
    SystemConfig,
    config_from_mapping,
    dbw_to_watts,
    load_config,
    watts_to_dbw,
)


def test_defaults_match_reference_operating_point():
    cfg = SystemConfig()
    assert cfg.antennas == 200
    assert cfg.users == 10
    assert cfg.pilot_length == 10
    assert cfg.coherence_block == 200
    assert cfg.noise_power == pytest.approx(10.0 ** -2.5)
    assert cfg.pilot_power == 1.0
    assert cfg.angular_spread == pytest.approx(math.pi / 18)
    assert cfg.estimated_subcarriers == 20
    assert cfg.detection_subcarriers == 20
    assert cfg.min_common_pilots == 6
    assert cfg.jammer_spread == cfg.angular_spread


def test_dbw_conversions_round_trip():
    assert dbw_to_watts(0.0) == 1.0
    assert dbw_to_watts(-25.0) == pytest.approx(10.0 ** -2.5)
    assert watts_to_dbw(dbw_to_watts(7.3)) == pytest.approx(7.3)


@pytest.mark.parametrize(
    "updates",
    [
        {"pilot_length": 9},
        {"coherence_block": 10},
        {"subcarriers_total": 641},
        {"detection_subcarriers": 21},
        {"detection_subcarriers": 0},
        {"pilot_power": -1.0},
        {"noise_power": 0.0},
        {"angular_spread": 0.0},
        {"fap_target": 0.0},
        {"fap_target": 1.0},
        {"threshold": -0.1},
        {"min_common_pilots": 1},
        {"min_common_pilots": 11},
    ],
)
def test_invalid_configurations_rejected(updates):
    with pytest.raises(ConfigurationError):
        SystemConfig().replace(**updates)


def test_replace_preserves_other_fields():
    cfg = SystemConfig().replace(jammer_training_power=2.5)
    assert cfg.jammer_training_power == 2.5
    assert cfg.antennas == 200


def test_mapping_converts_dbw_keys():
    cfg = config_from_mapping(
        {"jammer_training_power_dbw": -10.0, "noise_power_dbw": -25.0}
    )
    assert cfg.jammer_training_power == pytest.approx(0.1)
    assert cfg.noise_power == pytest.approx(10.0 ** -2.5)


def test_mapping_rejects_unknown_keys():
    with pytest.raises(ConfigurationError):
        config_from_mapping({"bogus_key": 1})


def test_load_config_defaults_and_file(tmp_path):
    assert load_config(None) == SystemConfig()
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"antennas": 64, "pilot_power_dbw": 3.0}))
    cfg = load_config(path)
    assert cfg.antennas == 64
    assert cfg.pilot_power == pytest.approx(10.0 ** 0.3)


def test_load_config_bad_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ConfigurationError):
        load_config(path)
    with pytest.raises(ConfigurationError):
        load_config(tmp_path / "missing.json")
    as_list = tmp_path / "list.json"
    as_list.write_text("[1, 2]")
    with pytest.raises(ConfigurationError):
        load_config(as_list)


def test_snapshot_is_json_ready():
    snap = SystemConfig().snapshot()
    assert json.loads(json.dumps(snap)) == snap
