"""Spin-dependent-force Ramsey readout chain and the sensitivity budget.

The spin ensemble is handled through closed-form population statistics;
the drive is taken exactly on the beat resonance (zero beat detuning), so
the precession angle is theta = (F0/hbar) Z_c tau cos(delta_phase).
The "e" in the single-shot resolution is Euler's number: it enters as
exp(Gamma tau) evaluated at the optimum Gamma tau = 1, not as the
elementary charge.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .core import CONST

SECONDS_PER_SQRT_HOUR = 60.0  # sqrt(3600 s/h)


@dataclass(frozen=True)
class ODFParams:
    f0: float                 # N, per-ion spin-dependent force
    tau: float                # s, precession duration
    gamma: float              # 1/s, spontaneous decay rate
    delta_mu: float = 0.0     # rad/s, beat detuning (modeled at 0 only)
    delta_phase: float = 0.0  # rad, drive-vs-force phase

    def __post_init__(self):
        if not self.f0 > 0.0:
            raise ValueError("f0 must be positive")
        if not self.tau > 0.0:
            raise ValueError("tau must be positive")
        if self.gamma < 0.0:
            raise ValueError("gamma must be non-negative")


@dataclass(frozen=True)
class EnsembleSpec:
    n_ions: int

    def __post_init__(self):
        if self.n_ions < 1:
            raise ValueError("need at least one ion")


def precession_angle(odf: ODFParams, zc: float) -> float:
    """theta = (F0/hbar) Z_c tau cos(delta_phase), rad."""
    return (odf.f0 / CONST.reduced_planck) * zc * odf.tau * math.cos(odf.delta_phase)


def ramsey_population(theta: float, gamma: float, tau: float) -> float:
    """Bright-state population (1 - exp(-Gamma tau) cos(theta)) / 2."""
    return 0.5 * (1.0 - math.exp(-gamma * tau) * math.cos(theta))


def population_difference(theta_max: float, gamma: float, tau: float) -> float:
    """Background-free signal from the delta=0 / delta=pi measurement pair."""
    return math.exp(-gamma * tau) * math.sin(theta_max)


def projection_noise_angle(ens: EnsembleSpec, odf: ODFParams) -> float:
    """Spin-projection-noise floor on theta_max: exp(Gamma tau)/sqrt(2N)."""
    return math.exp(odf.gamma * odf.tau) / math.sqrt(2.0 * ens.n_ions)


def population_snr(ens: EnsembleSpec, odf: ODFParams, zc: float) -> float:
    """Signal-to-noise of the paired population measurement at amplitude zc."""
    theta_max = precession_angle(odf, zc)
    return population_difference(theta_max, odf.gamma, odf.tau) * math.sqrt(
        2.0 * ens.n_ions)


def single_shot_amplitude_resolution(ens: EnsembleSpec, odf: ODFParams) -> float:
    """Amplitude giving SNR = 1: hbar exp(Gamma tau) / (F0 tau sqrt(2N)), m."""
    return (CONST.reduced_planck * math.exp(odf.gamma * odf.tau)
            / (odf.f0 * odf.tau * math.sqrt(2.0 * ens.n_ions)))


def averaged_sensitivity(single_shot: float, cycle_time: float) -> float:
    """Amplitude spectral density after repetition averaging, m/sqrt(Hz).

    single_shot * sqrt(cycle_time) == single_shot / sqrt(reps per second).
    """
    if not cycle_time > 0.0:
        raise ValueError("cycle_time must be positive")
    return single_shot * math.sqrt(cycle_time)


def rotation_sensitivity(amplitude_asd: float, scale_factor: float) -> float:
    """rad/s/sqrt(Hz) from amplitude ASD and m-per-(rad/s) scale factor."""
    if not scale_factor > 0.0:
        raise ValueError("scale_factor must be positive")
    return amplitude_asd / scale_factor


def angle_random_walk(rotation_asd: float) -> float:
    """ARW in rad/sqrt(h); exactly rotation ASD times 60."""
    return rotation_asd * SECONDS_PER_SQRT_HOUR


@dataclass(frozen=True)
class SensitivityBudget:
    theta_max: float                # rad, angle at the resolution floor
    delta_zc_single_shot: float     # m
    amplitude_asd: float            # m/sqrt(Hz)
    scale_factor: float             # m per rad/s
    rotation_asd: float             # rad/s/sqrt(Hz)
    arw: float                      # rad/sqrt(h)
    repetitions_per_s: float        # Hz
    cycle_time: float               # s

    def as_dict(self) -> dict:
        return {
            "theta_max_rad": self.theta_max,
            "delta_zc_single_shot_m": self.delta_zc_single_shot,
            "amplitude_asd_m_per_sqrt_hz": self.amplitude_asd,
            "scale_factor_m_per_rad_s": self.scale_factor,
            "rotation_asd_rad_s_per_sqrt_hz": self.rotation_asd,
            "arw_rad_per_sqrt_h": self.arw,
            "repetitions_per_s": self.repetitions_per_s,
            "cycle_time_s": self.cycle_time,
        }


def build_budget(ens: EnsembleSpec, odf: ODFParams, scale_factor: float,
                 cycle_time: float) -> SensitivityBudget:
    """Full deterministic chain from ODF/ensemble inputs to ARW."""
    single_shot = single_shot_amplitude_resolution(ens, odf)
    asd = averaged_sensitivity(single_shot, cycle_time)
    rot_asd = rotation_sensitivity(asd, scale_factor)
    return SensitivityBudget(
        theta_max=precession_angle(odf, single_shot),
        delta_zc_single_shot=single_shot,
        amplitude_asd=asd,
        scale_factor=scale_factor,
        rotation_asd=rot_asd,
        arw=angle_random_walk(rot_asd),
        repetitions_per_s=1.0 / cycle_time,
        cycle_time=cycle_time,
    )


def budget_json(budget: SensitivityBudget, extra: dict | None = None) -> str:
    payload = {"schema_version": 1}
    payload.update(budget.as_dict())
    if extra:
        payload.update(extra)
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
