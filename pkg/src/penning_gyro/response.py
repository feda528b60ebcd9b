"""Driven-damped oscillator transfer from rotation rate to axial amplitude.

The axial mode is a damped harmonic oscillator with spring constant
k_z = m omega_z^2 driven by the Coriolis force at the crystal rotation
frequency; Q is an input (the damping mechanism behind it is not modeled).
"""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class OscillatorParams:
    omega_z: float          # rad/s
    omega_r: float          # rad/s, drive (crystal rotation) frequency
    quality_factor: float   # Q = 1/(2 zeta); math.inf allowed (undamped)

    def __post_init__(self):
        if not self.omega_z > 0.0 or not self.omega_r > 0.0:
            raise ValueError("frequencies must be positive")
        if not self.quality_factor > 0.0:
            raise ValueError("Q must be positive")

    @property
    def zeta(self) -> float:
        return 0.0 if math.isinf(self.quality_factor) else 1.0 / (2.0 * self.quality_factor)

    @property
    def gamma_ratio(self) -> float:
        """Drive-to-resonance frequency ratio."""
        return self.omega_r / self.omega_z


@dataclass(frozen=True)
class AmplitudeResult:
    z_single: float        # m, per-ion amplitude at the given drive radius
    z_avg: float           # m, cloud average (= outermost/2 rule)
    drive_amplitude: float  # m
    rotation: float        # rad/s


def transfer_gain(params: OscillatorParams) -> float:
    """Dimensionless magnification 1/sqrt((1-G^2)^2 + (2 zeta G)^2)."""
    g = params.gamma_ratio
    z = params.zeta
    return 1.0 / math.hypot(1.0 - g * g, 2.0 * z * g)


def z_amplitude(omega_x: float, y_amp: float, params: OscillatorParams) -> AmplitudeResult:
    """Axial amplitude for one ion whose radial projection amplitude is y_amp.

    Z = (2 omega_r / omega_z^2) * gain * |Omega_x| * Y; at resonance this
    reduces exactly to Z = (2 Q / omega_z) * Omega_x * Y.
    """
    if y_amp < 0.0:
        raise ValueError("y_amp must be non-negative")
    z_single = (2.0 * params.omega_r * transfer_gain(params)
                / params.omega_z ** 2) * abs(omega_x) * y_amp
    return AmplitudeResult(z_single=z_single, z_avg=0.5 * z_single,
                           drive_amplitude=y_amp, rotation=omega_x)


def cloud_average_amplitude(r_cl: float, omega_x: float,
                            params: OscillatorParams) -> AmplitudeResult:
    """Cloud response; averaging rule is half of the outermost-ion amplitude.

    (A uniform disk's mean radius would be 2 r_cl/3; the half-the-outermost
    rule is kept deliberately as the cruder but standard bookkeeping.)
    """
    if not r_cl > 0.0:
        raise ValueError("r_cl must be positive")
    outer = z_amplitude(omega_x, r_cl, params)
    return AmplitudeResult(z_single=outer.z_single,
                           z_avg=0.5 * outer.z_single,
                           drive_amplitude=r_cl, rotation=omega_x)


def rotation_scale_factor(r_cl: float, params: OscillatorParams) -> float:
    """Cloud-average axial amplitude per unit rotation rate, m per rad/s."""
    return cloud_average_amplitude(r_cl, 1.0, params).z_avg
