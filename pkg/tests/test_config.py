import pytest

from penning_gyro.config import ConfigError, RunConfig, load_config, parse_config_text


def test_defaults():
    cfg = RunConfig()
    assert cfg.species == "Ca+"
    assert cfg.b_field_t == 1.0
    assert cfg.trap_voltage_v == 100.0
    assert cfg.n_crystal == 1000
    assert cfg.n_spins == 10000


def test_parse_values_and_comments():
    values = parse_config_text("""
    # comment line
    trap_voltage_v = 10.0   # inline comment
    n_crystal = 200
    species = Ca+
    """)
    assert values == {"trap_voltage_v": 10.0, "n_crystal": 200,
                      "species": "Ca+"}


def test_parse_unknown_field_reports_line():
    with pytest.raises(ConfigError, match="line 2"):
        parse_config_text("trap_voltage_v = 10\nbogus = 1\n")


def test_parse_bad_number():
    with pytest.raises(ConfigError, match="n_crystal"):
        parse_config_text("n_crystal = lots\n")
    with pytest.raises(ConfigError, match="finite"):
        parse_config_text("trap_voltage_v = inf\n")


def test_parse_missing_equals():
    with pytest.raises(ConfigError, match="key = value"):
        parse_config_text("just some words\n")


def test_load_config_override_precedence(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("trap_voltage_v = 10\nseed = 3\n")
    cfg = load_config(str(path), {"trap_voltage_v": "50"})
    assert cfg.trap_voltage_v == 50.0
    assert cfg.seed == 3


def test_load_config_missing_file():
    with pytest.raises(ConfigError, match="cannot read"):
        load_config("/nonexistent/run.cfg")


def test_unknown_species_rejected():
    with pytest.raises(ConfigError, match="unknown species"):
        RunConfig(species="Xe+").ion()


def test_wall_from_ratio_and_absolute():
    cfg = RunConfig()
    modes = cfg.modes()
    assert cfg.wall(modes).omega_r == pytest.approx(modes.omega_z)
    absolute = RunConfig(wall_freq_rad_s=1.2e6)
    assert absolute.wall(modes).omega_r == 1.2e6


def test_invalid_trap_becomes_config_error():
    with pytest.raises(ConfigError):
        RunConfig(b_field_t=-1.0).trap()
