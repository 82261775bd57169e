import pytest

from wsntrack.config import ConfigError, load_config, read_config_file, validate_config


def test_empty_input_gets_table1_defaults():
    cfg = validate_config({})
    assert cfg.packet_size_bytes == 127
    assert cfg.num_targets == 10
    assert cfg.duration_s == 360
    assert cfg.num_references == 56
    assert cfg.init_energy_mAh == 27.0
    assert cfg.tx_draw_mA == 44.0 and cfg.rx_draw_mA == 49.0
    assert (cfg.grid_width_m, cfg.grid_height_m) == (75, 65)


def test_zero_duration_rejected():
    with pytest.raises(ConfigError):
        validate_config({"duration_s": 0})


def test_rounds_floor():
    cfg = validate_config({"reporting_period_s": 2, "duration_s": 60})
    assert cfg.rounds == 30
    assert validate_config({"reporting_period_s": 7, "duration_s": 60}).rounds == 8


@pytest.mark.parametrize(
    "bad",
    [
        {"radio_range_m": 0},
        {"radio_range_m": -3},
        {"reporting_period_s": 0},
        {"leader_energy_threshold_fraction": 1.5},
        {"leader_energy_threshold_fraction": -0.1},
        {"aggregation_capacity": 0},
        {"packet_size_bytes": 0},
        {"noise_sigma_db": -1},
        {"num_targets": 2.5},
        {"no_such_key": 1},
        {"min_speed_mps": 2, "max_speed_mps": 1},
        {"sink_x_m": 500},
    ],
)
def test_invalid_settings(bad):
    with pytest.raises(ConfigError):
        validate_config(bad)


def test_string_values_are_coerced():
    cfg = validate_config({"num_targets": "12", "reporting_period_s": "3.5", "sink_x_m": "none"})
    assert cfg.num_targets == 12 and cfg.reporting_period_s == 3.5 and cfg.sink_x_m is None


def test_config_file_and_flag_override(tmp_path):
    path = tmp_path / "sim.cfg"
    path.write_text("# comment\nnum_targets = 4\nduration_s = 100  # inline\nseed=9\n")
    assert read_config_file(path) == {"num_targets": "4", "duration_s": "100", "seed": "9"}
    cfg = load_config(path, {"num_targets": 6, "seed": None})
    assert cfg.num_targets == 6 and cfg.duration_s == 100 and cfg.seed == 9


def test_missing_config_file_names_path(tmp_path):
    missing = tmp_path / "nope.cfg"
    with pytest.raises(ConfigError, match="nope.cfg"):
        load_config(missing)


def test_replace_revalidates(default_config):
    assert default_config.replace(num_targets=3).num_targets == 3
    with pytest.raises(ConfigError):
        default_config.replace(aggregation_capacity=0)
