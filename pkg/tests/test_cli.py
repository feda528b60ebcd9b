import csv
import json

import pytest

from penning_gyro.cli import EXIT_CONFIG, EXIT_OK, main


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_modes_text(capsys):
    code, out, _ = run(["modes"], capsys)
    assert code == EXIT_OK
    assert "magnetron" in out and "axial" in out


def test_modes_json(capsys):
    code, out, _ = run(["--json", "modes"], capsys)
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["f_z_hz"] == pytest.approx(247.3e3, rel=1e-3)
    assert payload["stable"] is True


def test_constants_json(capsys):
    code, out, _ = run(["--json", "constants"], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["elementary_charge"] == 1.602176634e-19


def test_unstable_trap_exit_code(capsys):
    code, _, err = run(["--set", "trap_voltage_v=130", "modes"], capsys)
    assert code == EXIT_CONFIG
    assert "unstable" in err


def test_unknown_field_exit_code(capsys):
    code, _, err = run(["--set", "bogus=1", "modes"], capsys)
    assert code == EXIT_CONFIG
    assert "unknown field" in err


def test_malformed_set_flag(capsys):
    code, _, err = run(["--set", "novalue", "modes"], capsys)
    assert code == EXIT_CONFIG


def test_fig3_csv_schema(tmp_path, capsys):
    code, out, _ = run(["--output-dir", str(tmp_path), "fig", "3"], capsys)
    assert code == EXIT_OK
    with open(tmp_path / "fig3_freq_difference.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["b_tesla", "v_volts", "fz_minus_fm_hz"]
    stable = [r for r in rows[1:] if r[2]]
    gaps = [r for r in rows[1:] if not r[2]]
    assert stable and gaps
    assert all(float(r[2]) > 0.0 for r in stable)


def test_fig1_csv_schema(tmp_path, capsys):
    code, _, _ = run(["--output-dir", str(tmp_path), "fig", "1"], capsys)
    assert code == EXIT_OK
    header = (tmp_path / "fig1_trajectory.csv").read_text().splitlines()[0]
    assert header == "t,x,y,z,vx,vy,vz"


def test_fig2_writes_axial_and_spectrum(tmp_path, capsys):
    code, _, _ = run(["--output-dir", str(tmp_path), "fig", "2"], capsys)
    assert code == EXIT_OK
    assert (tmp_path / "fig2_axial.csv").read_text().splitlines()[0] == "t,z"
    header = (tmp_path / "fig2_spectrum.csv").read_text().splitlines()[0]
    assert header == "freq_hz,power"


def test_fig5_csv_schema(tmp_path, capsys):
    code, _, _ = run(["--output-dir", str(tmp_path), "fig", "5"], capsys)
    assert code == EXIT_OK
    header = (tmp_path / "fig5_shape_vs_wall.csv").read_text().splitlines()[0]
    assert header == "v_volts,omega_r_rad_s,omega_r_over_omega_z,beta,alpha"


def test_unknown_figure_id(capsys):
    code, _, err = run(["fig", "9"], capsys)
    assert code == EXIT_CONFIG
    assert "unknown figure id" in err


def test_budget_writes_json(tmp_path, capsys):
    code, out, _ = run(["--output-dir", str(tmp_path), "--json", "budget"],
                       capsys)
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["schema_version"] == 1
    assert payload["beta"] == pytest.approx(0.0538, abs=0.0005)
    on_disk = json.loads((tmp_path / "budget.json").read_text())
    assert on_disk == payload


def test_crystal_small(tmp_path, capsys):
    code, out, _ = run(["--output-dir", str(tmp_path), "--seed", "1",
                        "crystal", "--ions", "12"], capsys)
    assert code == EXIT_OK
    lines = (tmp_path / "crystal.csv").read_text().splitlines()
    assert lines[0] == "ion_index,x_m,y_m,z_m"
    assert len(lines) == 13
    report = json.loads((tmp_path / "crystal_report.json").read_text())
    assert report["converged"] is True


def test_output_dir_env_var(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("PENNING_GYRO_OUTPUT_DIR", str(tmp_path / "envout"))
    code, _, _ = run(["fig", "3"], capsys)
    assert code == EXIT_OK
    assert (tmp_path / "envout" / "fig3_freq_difference.csv").exists()


def test_config_file_round_trip(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("trap_voltage_v = 10\n")
    code, out, _ = run(["--config", str(cfg), "--json", "modes"], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["f_z_hz"] == pytest.approx(78.2e3, rel=1e-3)
