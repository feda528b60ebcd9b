"""Single-particle motion in the trap with a rotation-rate input.

Force model (acceleration form, SI):

    a = -2 Omega x v                       Coriolis, Omega = (Omega_x, 0, 0)
      + (omega_z^2/2) * (x, y, -2z)        quadrupole electric field
      + (q/m) v x B                        Lorentz, B = (0, 0, B)

Sign convention: for a positive ion in B = +z the electric field defocuses
radially and restores axially, and the magnetron rotation is the ExB drift
(clockwise seen from +z).  This is the one arrangement that reproduces the
~8/78/384 kHz Ca+ mode triplet at 1 T / 10 V / z0 = 1 cm.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp, trapezoid

from .core import IonSpecies, RotationInput, TrapConfig, axial_frequency_squared, cyclotron_frequency
from .modes import ModeFrequencies, compute_modes


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class ParticleState:
    position: np.ndarray  # (3,) m
    velocity: np.ndarray  # (3,) m/s

    def __post_init__(self):
        pos = np.asarray(self.position, dtype=float)
        vel = np.asarray(self.velocity, dtype=float)
        if pos.shape != (3,) or vel.shape != (3,):
            raise ValueError("position and velocity must be 3-vectors")
        if not (np.all(np.isfinite(pos)) and np.all(np.isfinite(vel))):
            raise ValueError("state components must be finite")
        object.__setattr__(self, "position", pos)
        object.__setattr__(self, "velocity", vel)


@dataclass(frozen=True)
class IntegratorConfig:
    time_step: float               # s (fixed-step; also max step for rk45)
    total_time: float              # s
    method: str = "rk4"            # "rk4" (fixed step) or "rk45" (adaptive)
    rel_tol: float = 1e-9          # adaptive only
    abs_tol: float = 1e-12         # adaptive only
    sample_stride: int = 1         # keep every n-th step

    def __post_init__(self):
        if not self.time_step > 0.0:
            raise ValueError("time_step must be positive")
        if self.total_time < self.time_step:
            raise ValueError("total_time must be >= time_step")
        if self.method not in ("rk4", "rk45"):
            raise ValueError(f"unknown method {self.method!r}")
        for tol in (self.rel_tol, self.abs_tol):
            if not (0.0 < tol <= 1e-2):
                raise ValueError("tolerances must lie in (0, 1e-2]")
        if self.sample_stride < 1:
            raise ValueError("sample_stride must be >= 1")


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray       # (n,) s, strictly increasing
    positions: np.ndarray   # (n, 3) m
    velocities: np.ndarray  # (n, 3) m/s
    species: IonSpecies = field(repr=False, default=None)
    trap: TrapConfig = field(repr=False, default=None)
    rotation: RotationInput = field(repr=False, default=None)
    config: IntegratorConfig = field(repr=False, default=None)

    @property
    def uniform(self) -> bool:
        dt = np.diff(self.times)
        return bool(dt.size == 0 or np.allclose(dt, dt[0], rtol=1e-9, atol=0.0))

    def coordinate(self, name: str) -> np.ndarray:
        idx = {"x": 0, "y": 1, "z": 2}[name]
        return self.positions[:, idx]


def _coefficients(species: IonSpecies, trap: TrapConfig, rot: RotationInput):
    wz2 = axial_frequency_squared(species, trap)
    # signed Lorentz coefficient: q/m * B, sign of the charge kept
    wc = species.charge * trap.b_field / species.mass
    return wz2, wc, rot.omega_x


def acceleration(position, velocity, species: IonSpecies, trap: TrapConfig,
                 rot: RotationInput) -> np.ndarray:
    """Total acceleration at one phase-space point."""
    wz2, wc, ox = _coefficients(species, trap, rot)
    x, y, z = position
    vx, vy, vz = velocity
    return np.array([
        0.5 * wz2 * x + wc * vy,
        0.5 * wz2 * y - wc * vx + 2.0 * ox * vz,
        -wz2 * z - 2.0 * ox * vy,
    ])


def eom_derivative(state: ParticleState, species: IonSpecies, trap: TrapConfig,
                   rot: RotationInput) -> ParticleState:
    """Phase-space time derivative: (velocity, acceleration)."""
    return ParticleState(
        position=state.velocity.copy(),
        velocity=acceleration(state.position, state.velocity, species, trap, rot),
    )


def magnetron_orbit_state(radius: float, modes: ModeFrequencies) -> ParticleState:
    """Pure magnetron orbit of given radius, cold axial/cyclotron modes.

    Starting at (r, 0, 0) with velocity (0, -omega_m r, 0) excites the
    magnetron eigenmode only (clockwise ExB rotation).
    """
    return ParticleState(
        position=np.array([radius, 0.0, 0.0]),
        velocity=np.array([0.0, -modes.omega_m * radius, 0.0]),
    )


def _integrate_rk4(y0, wz2, wc, ox, dt, n_steps, stride):
    n_samples = n_steps // stride + 1
    out = np.empty((n_samples, 6))
    out[0] = y0
    x, y, z, vx, vy, vz = y0
    half = 0.5 * dt
    sixth = dt / 6.0
    k = 1
    for step in range(1, n_steps + 1):
        # k1
        a1x = 0.5 * wz2 * x + wc * vy
        a1y = 0.5 * wz2 * y - wc * vx + 2.0 * ox * vz
        a1z = -wz2 * z - 2.0 * ox * vy
        # k2 at midpoint using k1
        x2 = x + half * vx; y2 = y + half * vy; z2 = z + half * vz
        vx2 = vx + half * a1x; vy2 = vy + half * a1y; vz2 = vz + half * a1z
        a2x = 0.5 * wz2 * x2 + wc * vy2
        a2y = 0.5 * wz2 * y2 - wc * vx2 + 2.0 * ox * vz2
        a2z = -wz2 * z2 - 2.0 * ox * vy2
        # k3 at midpoint using k2
        x3 = x + half * vx2; y3 = y + half * vy2; z3 = z + half * vz2
        vx3 = vx + half * a2x; vy3 = vy + half * a2y; vz3 = vz + half * a2z
        a3x = 0.5 * wz2 * x3 + wc * vy3
        a3y = 0.5 * wz2 * y3 - wc * vx3 + 2.0 * ox * vz3
        a3z = -wz2 * z3 - 2.0 * ox * vy3
        # k4 at endpoint using k3
        x4 = x + dt * vx3; y4 = y + dt * vy3; z4 = z + dt * vz3
        vx4 = vx + dt * a3x; vy4 = vy + dt * a3y; vz4 = vz + dt * a3z
        a4x = 0.5 * wz2 * x4 + wc * vy4
        a4y = 0.5 * wz2 * y4 - wc * vx4 + 2.0 * ox * vz4
        a4z = -wz2 * z4 - 2.0 * ox * vy4

        x += sixth * (vx + 2.0 * (vx2 + vx3) + vx4)
        y += sixth * (vy + 2.0 * (vy2 + vy3) + vy4)
        z += sixth * (vz + 2.0 * (vz2 + vz3) + vz4)
        vx += sixth * (a1x + 2.0 * (a2x + a3x) + a4x)
        vy += sixth * (a1y + 2.0 * (a2y + a3y) + a4y)
        vz += sixth * (a1z + 2.0 * (a2z + a3z) + a4z)
        if step % stride == 0:
            out[k] = (x, y, z, vx, vy, vz)
            k += 1
    return out[:k]


def integrate(state0: ParticleState, species: IonSpecies, trap: TrapConfig,
              rot: RotationInput, cfg: IntegratorConfig) -> Trajectory:
    """Deterministic integration of the equation of motion.

    rk4 samples at exactly time_step * sample_stride spacing; rk45 uses
    scipy's adaptive RK45 evaluated on the same uniform output grid.
    """
    wz2, wc, ox = _coefficients(species, trap, rot)
    y0 = np.concatenate([state0.position, state0.velocity])
    n_steps = int(round(cfg.total_time / cfg.time_step))
    if cfg.method == "rk4":
        samples = _integrate_rk4(y0, wz2, wc, ox, cfg.time_step, n_steps,
                                 cfg.sample_stride)
        times = np.arange(samples.shape[0]) * (cfg.time_step * cfg.sample_stride)
    else:
        times = np.arange(n_steps // cfg.sample_stride + 1) * (
            cfg.time_step * cfg.sample_stride)

        def rhs(_t, u):
            x, y, z, vx, vy, vz = u
            return (vx, vy, vz,
                    0.5 * wz2 * x + wc * vy,
                    0.5 * wz2 * y - wc * vx + 2.0 * ox * vz,
                    -wz2 * z - 2.0 * ox * vy)

        sol = solve_ivp(rhs, (0.0, float(times[-1])), y0, method="RK45",
                        t_eval=times, rtol=cfg.rel_tol, atol=cfg.abs_tol)
        if not sol.success:
            raise IntegrationError(
                f"adaptive step failure near t={sol.t[-1] if sol.t.size else 0.0:.6g} s: "
                f"{sol.message}")
        samples = sol.y.T
    if not np.all(np.isfinite(samples)):
        bad = int(np.argmax(~np.all(np.isfinite(samples), axis=1)))
        raise IntegrationError(f"non-finite state at t={times[bad]:.6g} s")
    return Trajectory(times=times, positions=samples[:, :3],
                      velocities=samples[:, 3:], species=species, trap=trap,
                      rotation=rot, config=cfg)


def default_time_step(species: IonSpecies, trap: TrapConfig,
                      points_per_fast_period: int = 200) -> float:
    """dt = T_fastest / 200 with T_fastest the modified-cyclotron period."""
    modes = compute_modes(species, trap)
    return (2.0 * math.pi / modes.omega_cap_m) / points_per_fast_period


def periodogram(traj: Trajectory, coordinate: str = "z"):
    """One-sided power spectrum of a coordinate; requires uniform sampling."""
    if not traj.uniform:
        raise ValueError("non-uniform sampling; rerun with the fixed-step rk4 method")
    if traj.times.size < 4096:
        raise ValueError("need at least 4096 uniform samples for the spectrum")
    signal = traj.coordinate(coordinate)
    dt = traj.times[1] - traj.times[0]
    amplitudes = np.fft.rfft(signal - signal.mean())
    freqs = np.fft.rfftfreq(signal.size, dt)
    power = np.abs(amplitudes) ** 2 / signal.size
    return freqs, power


@dataclass(frozen=True)
class SpectralPeak:
    frequency: float  # Hz
    power: float


def extract_spectrum(traj: Trajectory, coordinate: str = "z",
                     floor_factor: float = 100.0) -> list[SpectralPeak]:
    """Dominant spectral peaks of one coordinate, sorted by power.

    A bin is a peak if it is a local maximum above floor_factor times the
    median spectral power.  Frequency resolution is 1/total_time.
    """
    freqs, power = periodogram(traj, coordinate)
    floor = floor_factor * np.median(power)
    if floor <= 0.0:
        return []
    peaks = []
    for i in range(1, power.size - 1):
        if power[i] > floor and power[i] >= power[i - 1] and power[i] > power[i + 1]:
            peaks.append(SpectralPeak(float(freqs[i]), float(power[i])))
    peaks.sort(key=lambda p: p.power, reverse=True)
    return peaks


def frequency_resolution(traj: Trajectory) -> float:
    return 1.0 / float(traj.times[-1] - traj.times[0])


def energy(traj: Trajectory) -> np.ndarray:
    """Kinetic + electrostatic energy per sample, lab frame, J.

    Only valid at zero rotation input: with Omega != 0 the frame is
    non-inertial and this sum is not conserved, so the call is refused.
    """
    if traj.rotation is not None and traj.rotation.omega_x != 0.0:
        raise ValueError("energy diagnostic requires a zero-rotation trajectory")
    m = traj.species.mass
    wz2 = axial_frequency_squared(traj.species, traj.trap)
    kinetic = 0.5 * m * np.sum(traj.velocities ** 2, axis=1)
    x, y, z = traj.positions.T
    potential = 0.5 * m * wz2 * z ** 2 - 0.25 * m * wz2 * (x ** 2 + y ** 2)
    return kinetic + potential


def driven_amplitude(traj: Trajectory, drive_omega: float,
                     coordinate: str = "z",
                     discard_fraction: float = 0.2) -> float:
    """Lock-in amplitude of a coordinate at the drive frequency.

    The first discard_fraction of the run is skipped and the demodulation
    window is truncated to an integer number of drive periods, which keeps
    leakage from the free oscillation at the per-mille level.
    """
    if not traj.uniform:
        raise ValueError("non-uniform sampling; rerun with the fixed-step rk4 method")
    t = traj.times
    signal = traj.coordinate(coordinate)
    start = int(discard_fraction * t.size)
    t, signal = t[start:], signal[start:]
    period = 2.0 * math.pi / drive_omega
    n_periods = int((t[-1] - t[0]) / period)
    if n_periods < 1:
        raise ValueError("window shorter than one drive period")
    keep = t - t[0] <= n_periods * period
    t, signal = t[keep], signal[keep]
    in_phase = trapezoid(signal * np.cos(drive_omega * t), t)
    quadrature = trapezoid(signal * np.sin(drive_omega * t), t)
    window = t[-1] - t[0]
    return 2.0 * math.hypot(in_phase, quadrature) / window


def write_trajectory_csv(traj: Trajectory, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "x", "y", "z", "vx", "vy", "vz"])
        for i in range(traj.times.size):
            writer.writerow([repr(float(traj.times[i]))]
                            + [repr(float(v)) for v in traj.positions[i]]
                            + [repr(float(v)) for v in traj.velocities[i]])


def write_spectrum_csv(traj: Trajectory, coordinate: str, path) -> None:
    freqs, power = periodogram(traj, coordinate)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["freq_hz", "power"])
        for f, p in zip(freqs, power):
            writer.writerow([repr(float(f)), repr(float(p))])
