"""Cold-fluid spheroid model of the rotating crystal.

Two independent routes to the aspect ratio are shipped side by side:

* ``aspect_ratio_from_beta`` solves the cold-fluid shape relation written
  with the k0/k1 intermediates.  The published grouping of that relation,
  k1 * [(1-k0^2)^(-1/2) * asin(k0)/k0], simplifies to 3*asin(k0)/k0^3
  which is >= 3pi/2 on the whole oblate branch and therefore can never
  equal 3/(2*beta+1) <= 3 for beta > 0: it has no root.  The single
  repaired reading that admits roots inserts the evidently dropped minus,
  k1 * [(1-k0^2)^(-1/2) - asin(k0)/k0], and that is what is solved here.
* ``oracle_aspect_ratio_depolarization`` triangulates via the uniform
  spheroid depolarization coefficients (A_perp/A_z balance) without ever
  forming k0/k1.

Both are monotone in beta and agree to root-finder precision; the CLI
still cross-prints them and warns on >10% disagreement.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

from scipy.optimize import brentq

from .core import CONST, IonSpecies
from .modes import ModeFrequencies


class WallFrequencyError(ValueError):
    """omega_r outside the (omega_m, Omega_m) validity window."""


class AspectRatioBracketError(ValueError):
    """No sign change found when scanning the shape relation residual."""

    def __init__(self, message, alphas, residuals):
        super().__init__(message)
        self.alphas = alphas
        self.residuals = residuals


@dataclass(frozen=True)
class RotatingWallConfig:
    omega_r: float          # rad/s, crystal rotation frequency
    delta: float            # relative wall strength
    theta: float = 0.0      # drive phase, rad

    def __post_init__(self):
        if not (0.0 <= self.delta < 1.0):
            raise ValueError("delta must lie in [0, 1)")
        if not self.omega_r > 0.0:
            raise ValueError("omega_r must be positive")


@dataclass(frozen=True)
class ShapeParams:
    beta: float
    alpha: float
    k0: float
    k1: float


@dataclass(frozen=True)
class SpheroidGeometry:
    r_cl: float        # m, equatorial radius
    z_cl: float        # m, axial half-extent
    density_n: float   # m^-3
    ion_count: float
    a0: float          # m, Coulomb-vs-trap length scale

    def __post_init__(self):
        if not (self.r_cl > self.z_cl > 0.0):
            raise ValueError("oblate branch requires r_cl > z_cl > 0")


def shape_beta(modes: ModeFrequencies, omega_r: float) -> float:
    """Radial-to-axial confinement ratio in the rotating frame."""
    if not (modes.omega_m < omega_r < modes.omega_cap_m):
        raise WallFrequencyError(
            f"omega_r={omega_r:.6g} rad/s outside the validity window "
            f"({modes.omega_m:.6g}, {modes.omega_cap_m:.6g}) rad/s")
    wz2 = modes.omega_z ** 2
    return (omega_r * (modes.omega_c - omega_r) - 0.5 * wz2) / wz2


def normalized_wall_frequency(modes: ModeFrequencies, omega_r: float) -> float:
    """omega_z^2 / (2 omega_r (omega_c - omega_r)); equals 1/(2 beta + 1)."""
    return modes.omega_z ** 2 / (2.0 * omega_r * (modes.omega_c - omega_r))


def cold_fluid_residual(alpha: float, beta: float) -> float:
    """Residual of the k0/k1 shape relation at a trial aspect ratio."""
    k0 = math.sqrt(1.0 - alpha * alpha)
    k1 = 3.0 * math.sqrt(1.0 - k0 * k0) / k0 ** 2
    bracket = 1.0 / math.sqrt(1.0 - k0 * k0) - math.asin(k0) / k0
    return 3.0 / (2.0 * beta + 1.0) - k1 * bracket


def axial_depolarization(alpha: float) -> float:
    """A_z of a uniform oblate spheroid with aspect ratio alpha in (0, 1)."""
    ecc = math.sqrt(1.0 - alpha * alpha)
    return (1.0 - alpha * math.asin(ecc) / ecc) / ecc ** 2


def _depolarization_residual(alpha: float, beta: float) -> float:
    a_z = axial_depolarization(alpha)
    a_perp = 0.5 * (1.0 - a_z)
    return beta - a_perp / a_z


@dataclass(frozen=True)
class AspectRatioRoot:
    alpha: float
    residual: float
    n_roots: int


_SCAN_LO = 1e-6
_SCAN_HI = 1.0 - 1e-6
_SCAN_STEP = 1e-3


def _bracketed_root(residual: Callable[[float, float], float],
                    beta: float) -> AspectRatioRoot:
    """Scan [1e-6, 1-1e-6] at 1e-3 resolution, then refine each bracket."""
    n = int((_SCAN_HI - _SCAN_LO) / _SCAN_STEP) + 1
    alphas = [_SCAN_LO + i * _SCAN_STEP for i in range(n)]
    if alphas[-1] < _SCAN_HI:
        alphas.append(_SCAN_HI)
    values = [residual(a, beta) for a in alphas]
    roots: list[float] = []
    for i in range(len(alphas) - 1):
        lo, hi = values[i], values[i + 1]
        if lo == 0.0:
            roots.append(alphas[i])
        elif lo * hi < 0.0:
            roots.append(brentq(residual, alphas[i], alphas[i + 1],
                                args=(beta,), xtol=1e-15, rtol=8.9e-16))
    if not roots:
        raise AspectRatioBracketError(
            f"shape relation has no sign change on ({_SCAN_LO}, {_SCAN_HI}) "
            f"for beta={beta:.6g}", alphas, values)
    if len(roots) > 1:
        warnings.warn(f"{len(roots)} aspect-ratio roots for beta={beta:.6g}; "
                      "returning the smallest")
    alpha = min(roots)
    return AspectRatioRoot(alpha=alpha, residual=residual(alpha, beta),
                           n_roots=len(roots))


def aspect_ratio_root(beta: float) -> AspectRatioRoot:
    """Root of the k0/k1 relation with its residual attached."""
    if not (0.0 < beta < 1.0):
        raise ValueError("oblate branch requires 0 < beta < 1")
    return _bracketed_root(cold_fluid_residual, beta)


def aspect_ratio_from_beta(beta: float) -> float:
    """Aspect ratio alpha = z_cl/r_cl on the oblate branch."""
    return aspect_ratio_root(beta).alpha


def oracle_aspect_ratio_depolarization(beta: float) -> float:
    """Independent cross-check via depolarization coefficients."""
    if not (0.0 < beta < 1.0):
        raise ValueError("oblate branch requires 0 < beta < 1")
    return _bracketed_root(_depolarization_residual, beta).alpha


def shape_params(modes: ModeFrequencies, omega_r: float) -> ShapeParams:
    beta = shape_beta(modes, omega_r)
    alpha = aspect_ratio_from_beta(beta)
    k0 = math.sqrt(1.0 - alpha * alpha)
    return ShapeParams(beta=beta, alpha=alpha, k0=k0,
                       k1=3.0 * math.sqrt(1.0 - k0 * k0) / k0 ** 2)


def coulomb_trap_length(species: IonSpecies, omega_z: float) -> float:
    """a0 = (q^2 / (4 pi eps0 m omega_z^2))^(1/3).

    The m in the denominator is required for a0 to be a length; the
    mass-less variant sometimes quoted is dimensionally inconsistent.
    """
    k = species.charge ** 2 / (4.0 * math.pi * CONST.vacuum_permittivity)
    return (k / (species.mass * omega_z ** 2)) ** (1.0 / 3.0)


def spheroid_dimensions(n_ions: float, alpha: float, beta: float,
                        omega_z: float, species: IonSpecies) -> SpheroidGeometry:
    """Equatorial radius, half-height and density of the uniform spheroid."""
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    if n_ions < 1:
        raise ValueError("need at least one ion")
    a0 = coulomb_trap_length(species, omega_z)
    r_cl = a0 * (3.0 / (2.0 * beta + 1.0) * n_ions / alpha) ** (1.0 / 3.0)
    z_cl = alpha * r_cl
    density = n_ions / (4.0 / 3.0 * math.pi * z_cl * r_cl ** 2)
    return SpheroidGeometry(r_cl=r_cl, z_cl=z_cl, density_n=density,
                            ion_count=n_ions, a0=a0)


PLANARITY_THRESHOLD = 0.1  # "much less than 1" pinned to a usable number


@dataclass(frozen=True)
class PlanarityReport:
    planar: bool               # beta < threshold
    wall_dominated: bool       # beta > delta
    passes: bool
    planar_margin: float       # threshold - beta
    wall_margin: float         # beta - delta


def planarity_check(beta: float, delta: float,
                    threshold: float = PLANARITY_THRESHOLD) -> PlanarityReport:
    planar = beta < threshold
    wall = beta > delta
    return PlanarityReport(planar=planar, wall_dominated=wall,
                           passes=planar and wall,
                           planar_margin=threshold - beta,
                           wall_margin=beta - delta)


@dataclass(frozen=True)
class ShapeSweepRow:
    omega_r: float
    omega_r_over_omega_z: float
    normalized_freq: float
    beta: float
    alpha: float | None   # None when beta leaves the oblate branch
    r_cl: float | None
    z_cl: float | None


def shape_sweep(species: IonSpecies, modes: ModeFrequencies,
                omega_r_grid: Sequence[float],
                n_ions: float = 1000.0) -> list[ShapeSweepRow]:
    """One row per grid point; beta outside (0, 1) yields gap markers."""
    rows = []
    for omega_r in omega_r_grid:
        beta = shape_beta(modes, omega_r)
        if 0.0 < beta < 1.0:
            alpha = aspect_ratio_from_beta(beta)
            geom = spheroid_dimensions(n_ions, alpha, beta, modes.omega_z, species)
            r_cl, z_cl = geom.r_cl, geom.z_cl
        else:
            alpha = r_cl = z_cl = None
        rows.append(ShapeSweepRow(
            omega_r=omega_r,
            omega_r_over_omega_z=omega_r / modes.omega_z,
            normalized_freq=normalized_wall_frequency(modes, omega_r),
            beta=beta, alpha=alpha, r_cl=r_cl, z_cl=z_cl))
    return rows


def write_shape_csv(rows: Sequence[ShapeSweepRow], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["omega_r_rad_s", "omega_r_over_omega_z",
                         "normalized_freq", "beta", "alpha", "r_cl_m", "z_cl_m"])
        for r in rows:
            writer.writerow([
                repr(r.omega_r), repr(r.omega_r_over_omega_z),
                repr(r.normalized_freq), repr(r.beta),
                "" if r.alpha is None else repr(r.alpha),
                "" if r.r_cl is None else repr(r.r_cl),
                "" if r.z_cl is None else repr(r.z_cl)])
