import math

import numpy as np
import pytest

from penning_gyro.core import RotationInput
from penning_gyro.dynamics import (
    IntegratorConfig,
    ParticleState,
    Trajectory,
    acceleration,
    default_time_step,
    driven_amplitude,
    energy,
    extract_spectrum,
    integrate,
    magnetron_orbit_state,
    periodogram,
    write_spectrum_csv,
    write_trajectory_csv,
)

NO_ROTATION = RotationInput(0.0)


def _short_cfg(ca40, trap, n_fast_periods=40, stride=1):
    dt = default_time_step(ca40, trap)
    return IntegratorConfig(time_step=dt, total_time=n_fast_periods * 200 * dt,
                            sample_stride=stride)


def test_integrator_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(time_step=0.0, total_time=1.0)
    with pytest.raises(ValueError):
        IntegratorConfig(time_step=1e-3, total_time=1e-4)
    with pytest.raises(ValueError):
        IntegratorConfig(time_step=1e-6, total_time=1e-3, method="euler")
    with pytest.raises(ValueError):
        IntegratorConfig(time_step=1e-6, total_time=1e-3, rel_tol=0.5)


def test_state_validation():
    with pytest.raises(ValueError):
        ParticleState(position=np.zeros(2), velocity=np.zeros(3))
    with pytest.raises(ValueError):
        ParticleState(position=np.array([np.nan, 0, 0]), velocity=np.zeros(3))


def test_magnetron_orbit_radius_conserved(ca40, trap10, modes10):
    state0 = magnetron_orbit_state(25e-6, modes10)
    traj = integrate(state0, ca40, trap10, NO_ROTATION,
                     _short_cfg(ca40, trap10))
    r = np.hypot(traj.positions[:, 0], traj.positions[:, 1])
    assert np.max(np.abs(r / 25e-6 - 1.0)) < 1e-6


def test_magnetron_rotation_is_clockwise(ca40, trap10, modes10):
    # ExB drift for positive charge, B = +z: angular momentum L_z < 0
    state0 = magnetron_orbit_state(25e-6, modes10)
    traj = integrate(state0, ca40, trap10, NO_ROTATION,
                     _short_cfg(ca40, trap10))
    l_z = (traj.positions[:, 0] * traj.velocities[:, 1]
           - traj.positions[:, 1] * traj.velocities[:, 0])
    assert np.all(l_z < 0.0)


def test_rk4_matches_rk45(ca40, trap10, modes10):
    state0 = ParticleState(position=np.array([10e-6, 0.0, 5e-6]),
                           velocity=np.array([0.0, 0.1, 0.0]))
    cfg4 = _short_cfg(ca40, trap10, n_fast_periods=10)
    cfg45 = IntegratorConfig(time_step=cfg4.time_step,
                             total_time=cfg4.total_time, method="rk45",
                             rel_tol=1e-10, abs_tol=1e-14)
    t4 = integrate(state0, ca40, trap10, RotationInput(5.0), cfg4)
    t45 = integrate(state0, ca40, trap10, RotationInput(5.0), cfg45)
    assert np.allclose(t4.positions, t45.positions, rtol=0.0, atol=2e-11)


def test_energy_conserved_without_rotation(ca40, trap10, modes10):
    state0 = ParticleState(position=np.array([15e-6, 0.0, 8e-6]),
                           velocity=np.array([0.0, -1.0, 0.0]))
    traj = integrate(state0, ca40, trap10, NO_ROTATION,
                     _short_cfg(ca40, trap10))
    e = energy(traj)
    assert np.max(np.abs(e / e[0] - 1.0)) < 1e-8


def test_energy_refuses_rotating_run(ca40, trap10, modes10):
    state0 = magnetron_orbit_state(5e-6, modes10)
    traj = integrate(state0, ca40, trap10, RotationInput(1.0),
                     _short_cfg(ca40, trap10, n_fast_periods=2))
    with pytest.raises(ValueError):
        energy(traj)


def test_spectrum_recovers_mode_frequencies(ca40, trap10, modes10):
    state0 = ParticleState(position=np.array([20e-6, 0.0, 10e-6]),
                           velocity=np.array([0.0, -0.5 * modes10.omega_m * 20e-6, 0.0]))
    dt = default_time_step(ca40, trap10)
    cfg = IntegratorConfig(time_step=dt, total_time=5e-3, sample_stride=4)
    traj = integrate(state0, ca40, trap10, NO_ROTATION, cfg)
    resolution = 1.0 / cfg.total_time
    z_peaks = extract_spectrum(traj, "z")
    assert z_peaks[0].frequency == pytest.approx(modes10.f_z, abs=2 * resolution)
    x_peaks = extract_spectrum(traj, "x")
    found = sorted(p.frequency for p in x_peaks[:2])
    assert found[0] == pytest.approx(modes10.f_m, abs=2 * resolution)
    assert found[1] == pytest.approx(modes10.f_cap_m, abs=2 * resolution)


def test_periodogram_needs_enough_samples(ca40, trap10, modes10):
    traj = integrate(magnetron_orbit_state(5e-6, modes10), ca40, trap10,
                     NO_ROTATION, _short_cfg(ca40, trap10, n_fast_periods=2))
    assert traj.times.size < 4096
    with pytest.raises(ValueError):
        periodogram(traj)


def test_periodogram_rejects_nonuniform(ca40, trap10):
    times = np.concatenate([np.linspace(0, 1, 3000),
                            np.linspace(1.001, 2, 3000)])
    traj = Trajectory(times=times, positions=np.zeros((6000, 3)),
                      velocities=np.zeros((6000, 3)))
    with pytest.raises(ValueError):
        periodogram(traj)


def test_driven_amplitude_on_synthetic_tone():
    omega = 2.0 * math.pi * 1000.0
    t = np.linspace(0.0, 0.05, 20001)
    z = 3.7e-9 * np.sin(omega * t + 0.3) + 1.1e-9 * np.sin(0.37 * omega * t)
    traj = Trajectory(times=t, positions=np.column_stack([0 * t, 0 * t, z]),
                      velocities=np.zeros((t.size, 3)))
    amp = driven_amplitude(traj, omega)
    assert amp == pytest.approx(3.7e-9, rel=0.01)


def test_acceleration_components(ca40, trap10):
    # pure axial displacement: restoring force along -z only
    a = acceleration(np.array([0.0, 0.0, 1e-6]), np.zeros(3), ca40, trap10,
                     NO_ROTATION)
    assert a[2] < 0.0 and a[0] == 0.0 and a[1] == 0.0
    # coriolis coupling: axial velocity drives y for rotation about x
    a = acceleration(np.zeros(3), np.array([0.0, 0.0, 1.0]), ca40, trap10,
                     RotationInput(2.0))
    assert a[1] == pytest.approx(4.0)


def test_spectrum_csv_schema(ca40, trap10, modes10, tmp_path):
    dt = default_time_step(ca40, trap10)
    cfg = IntegratorConfig(time_step=dt, total_time=5000 * dt)
    traj = integrate(magnetron_orbit_state(5e-6, modes10), ca40, trap10,
                     NO_ROTATION, cfg)
    path = tmp_path / "spectrum.csv"
    write_spectrum_csv(traj, "x", path)
    header = path.read_text().splitlines()[0]
    assert header == "freq_hz,power"


def test_trajectory_csv_schema(ca40, trap10, modes10, tmp_path):
    traj = integrate(magnetron_orbit_state(5e-6, modes10), ca40, trap10,
                     NO_ROTATION, _short_cfg(ca40, trap10, n_fast_periods=1))
    path = tmp_path / "traj.csv"
    write_trajectory_csv(traj, path)
    header = path.read_text().splitlines()[0]
    assert header == "t,x,y,z,vx,vy,vz"
