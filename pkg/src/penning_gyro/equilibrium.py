"""N-body crystal equilibrium in the co-rotating frame.

The time-independent potential (per-ion quadratic confinement plus
once-per-unordered-pair Coulomb repulsion) is minimized directly.  The
double-sum form with the 1/(8 pi eps0) prefactor counts every pair twice;
the once-per-pair 1/(4 pi eps0) form used here is algebraically identical
and is unit-tested against the two-ion closed form.

All internal arithmetic is done in trap units (lengths in a0, energies in
m omega_z^2 a0^2) where the Coulomb pair term is exactly 1/d; this keeps
the minimizer well conditioned at any ion count.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import cKDTree

from .core import IonSpecies
from .modes import ModeFrequencies
from .shape import (
    RotatingWallConfig,
    coulomb_trap_length,
    oracle_aspect_ratio_depolarization,
    shape_beta,
    spheroid_dimensions,
)


class ConvergenceError(RuntimeError):
    def __init__(self, message, best_config, report):
        super().__init__(message)
        self.best_config = best_config
        self.report = report


@dataclass(frozen=True)
class IonConfiguration:
    positions: np.ndarray  # (N, 3) m, rotating frame

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 3:
            raise ValueError("positions must be an (N, 3) array")
        if not np.all(np.isfinite(pos)):
            raise ValueError("positions must be finite")
        if pos.shape[0] > 1:
            tree = cKDTree(pos)
            d, _ = tree.query(pos, k=2)
            if np.min(d[:, 1]) <= 0.0:
                raise ValueError("coincident ions")
        object.__setattr__(self, "positions", pos)

    @property
    def ion_count(self) -> int:
        return self.positions.shape[0]


@dataclass(frozen=True)
class RelaxationConfig:
    max_iterations: int = 20000
    force_tolerance: float = 1e-21   # N, per component
    initial_seed: int = 0
    annealing_restarts: int = 2
    # backtracking parameters for the descent polish stage
    armijo_c: float = 1e-4
    step_shrink: float = 0.5
    step_grow: float = 1.25

    def __post_init__(self):
        if not self.force_tolerance > 0.0:
            raise ValueError("force_tolerance must be positive")
        if self.annealing_restarts < 0:
            raise ValueError("annealing_restarts must be >= 0")


@dataclass(frozen=True)
class ConvergenceReport:
    converged: bool
    final_energy: float       # J
    max_force: float          # N, largest residual component
    iterations: int
    restarts_used: int

    def as_dict(self) -> dict:
        return {
            "converged": self.converged,
            "final_energy_j": self.final_energy,
            "max_force_n": self.max_force,
            "iterations": self.iterations,
            "restarts_used": self.restarts_used,
        }


def _scales(species: IonSpecies, modes: ModeFrequencies):
    a0 = coulomb_trap_length(species, modes.omega_z)
    energy_scale = species.mass * modes.omega_z ** 2 * a0 ** 2
    force_scale = species.mass * modes.omega_z ** 2 * a0
    return a0, energy_scale, force_scale


def _curvatures(modes: ModeFrequencies, wall: RotatingWallConfig):
    beta = shape_beta(modes, wall.omega_r)
    # wall squeezes x and releases y for a positive delta
    return beta + wall.delta, beta - wall.delta, beta


def _scaled_energy_gradient(u: np.ndarray, kx: float, ky: float):
    """Energy and gradient in trap units; u is (N, 3)."""
    conf = 0.5 * (kx * np.sum(u[:, 0] ** 2) + ky * np.sum(u[:, 1] ** 2)
                  + np.sum(u[:, 2] ** 2))
    grad = np.empty_like(u)
    grad[:, 0] = kx * u[:, 0]
    grad[:, 1] = ky * u[:, 1]
    grad[:, 2] = u[:, 2]
    if u.shape[0] > 1:
        diff = u[:, None, :] - u[None, :, :]
        dist = np.sqrt(np.sum(diff ** 2, axis=-1))
        np.fill_diagonal(dist, np.inf)
        if not np.all(dist > 0.0):
            raise ValueError("coincident ions")
        inv = 1.0 / dist
        coulomb = 0.5 * np.sum(inv)
        grad -= np.sum(diff * (inv ** 3)[:, :, None], axis=1)
        return conf + coulomb, grad
    return conf, grad


def rotating_frame_potential(config: IonConfiguration, species: IonSpecies,
                             modes: ModeFrequencies,
                             wall: RotatingWallConfig) -> float:
    """Total time-independent potential energy, J."""
    a0, e_scale, _ = _scales(species, modes)
    kx, ky, _ = _curvatures(modes, wall)
    value, _ = _scaled_energy_gradient(config.positions / a0, kx, ky)
    return value * e_scale


def forces(config: IonConfiguration, species: IonSpecies,
           modes: ModeFrequencies, wall: RotatingWallConfig) -> np.ndarray:
    """Analytic negative gradient of the potential, (N, 3) newtons."""
    a0, _, f_scale = _scales(species, modes)
    kx, ky, _ = _curvatures(modes, wall)
    _, grad = _scaled_energy_gradient(config.positions / a0, kx, ky)
    return -grad * f_scale


def _hex_patch(n: int, radius: float, rng: np.random.Generator) -> np.ndarray:
    """Jittered hexagonal patch of n sites scaled to the given radius."""
    spacing = 1.0
    sites = [(0.0, 0.0)]
    ring = 1
    while len(sites) < 4 * n:
        for k in range(6 * ring):
            angle = 2.0 * math.pi * k / (6 * ring)
            # hexagonal ring approximated on a circle; jitter breaks ties
            sites.append((ring * spacing * math.cos(angle),
                          ring * spacing * math.sin(angle)))
        ring += 1
    sites = np.array(sites)
    order = np.argsort(np.hypot(sites[:, 0], sites[:, 1]), kind="stable")
    sites = sites[order[:n]]
    extent = max(np.max(np.hypot(sites[:, 0], sites[:, 1])), spacing)
    sites *= radius / extent
    out = np.zeros((n, 3))
    out[:, :2] = sites
    out += rng.normal(scale=0.02 * radius / math.sqrt(n), size=out.shape)
    return out


def _descend(u, kx, ky, tol, max_iter, cfg: RelaxationConfig):
    """L-BFGS to near the floor, then backtracking steepest descent polish.

    L-BFGS alone stalls above very tight gradient floors; the descent
    polish with Armijo backtracking reliably grinds the residual below
    tol.  Returns (u, converged, iterations_used).
    """
    n = u.shape[0]
    flat = u.reshape(-1)

    def fun(x):
        value, grad = _scaled_energy_gradient(x.reshape(n, 3), kx, ky)
        return value, grad.reshape(-1)

    res = minimize(fun, flat, jac=True, method="L-BFGS-B",
                   options={"maxiter": cfg.max_iterations, "ftol": 1e-18,
                            "gtol": tol / 10.0, "maxcor": 20})
    u = res.x.reshape(n, 3)
    iters = int(res.nit)
    value, grad = _scaled_energy_gradient(u, kx, ky)
    step = 0.1
    while np.max(np.abs(grad)) >= tol and iters < cfg.max_iterations:
        direction = -grad
        g2 = np.sum(grad * grad)
        while True:
            trial = u + step * direction
            try:
                t_value, t_grad = _scaled_energy_gradient(trial, kx, ky)
            except ValueError:
                t_value = np.inf
            if t_value <= value - cfg.armijo_c * step * g2:
                break
            step *= cfg.step_shrink
            if step < 1e-18:
                return u, False, iters
        u, value, grad = trial, t_value, t_grad
        step *= cfg.step_grow
        iters += 1
    return u, bool(np.max(np.abs(grad)) < tol), iters


def relax(n_ions: int, species: IonSpecies, modes: ModeFrequencies,
          wall: RotatingWallConfig, cfg: RelaxationConfig = RelaxationConfig()):
    """Minimize the rotating-frame potential; deterministic for fixed seed.

    Returns (IonConfiguration, ConvergenceReport); raises ConvergenceError
    with the best-found configuration attached if the force floor is not
    reached after all annealing restarts.
    """
    if n_ions < 1:
        raise ValueError("need at least one ion")
    kx, ky, beta = _curvatures(modes, wall)
    if beta <= 0.0:
        raise ValueError("beta must be positive for a confined crystal")
    if beta <= wall.delta:
        raise ValueError("wall dominance requires beta > delta")
    a0, e_scale, f_scale = _scales(species, modes)
    tol = cfg.force_tolerance / f_scale
    rng = np.random.default_rng(cfg.initial_seed)

    if n_ions == 1:
        config = IonConfiguration(np.zeros((1, 3)))
        report = ConvergenceReport(True, 0.0, 0.0, 0, 0)
        return config, report

    alpha_guess = oracle_aspect_ratio_depolarization(min(beta, 0.999))
    r_guess = spheroid_dimensions(n_ions, alpha_guess, beta, modes.omega_z,
                                  species).r_cl / a0
    u = _hex_patch(n_ions, r_guess, rng)

    best_u = None
    best_value = np.inf
    iters_total = 0
    restarts_used = 0
    converged_any = False
    for attempt in range(cfg.annealing_restarts + 1):
        if attempt > 0:
            restarts_used += 1
            base = best_u if best_u is not None else u
            nn = _nearest_neighbor_distances(base)
            u = base + rng.normal(scale=0.05 * np.median(nn), size=base.shape)
        u, ok, iters = _descend(u, kx, ky, tol, cfg.max_iterations, cfg)
        iters_total += iters
        value, grad = _scaled_energy_gradient(u, kx, ky)
        # converged beats non-converged; ties broken by energy
        better = (ok, -value) > (converged_any, -best_value)
        if best_u is None or better:
            best_u, best_value = u.copy(), value
            converged_any = converged_any or ok

    value, grad = _scaled_energy_gradient(best_u, kx, ky)
    max_force = float(np.max(np.abs(grad))) * f_scale
    report = ConvergenceReport(
        converged=converged_any,
        final_energy=value * e_scale,
        max_force=max_force,
        iterations=iters_total,
        restarts_used=restarts_used,
    )
    config = IonConfiguration(best_u * a0)
    if not converged_any:
        raise ConvergenceError(
            f"relaxation failed to reach {cfg.force_tolerance:.3g} N "
            f"(residual {max_force:.3g} N)", config, report)
    return config, report


def _nearest_neighbor_distances(positions: np.ndarray) -> np.ndarray:
    tree = cKDTree(positions)
    d, _ = tree.query(positions, k=2)
    return d[:, 1]


@dataclass(frozen=True)
class ShapeStats:
    alpha_md: float          # z-extent / radial extent
    r_extent: float          # m
    z_extent: float          # m
    spacing_median: float    # m, nearest-neighbor
    spacing_spread: float    # m, interquartile range
    low_confidence: bool     # True for N < 20

    def as_dict(self) -> dict:
        return {
            "alpha_md": self.alpha_md,
            "r_extent_m": self.r_extent,
            "z_extent_m": self.z_extent,
            "spacing_median_m": self.spacing_median,
            "spacing_iqr_m": self.spacing_spread,
            "low_confidence": self.low_confidence,
        }


def measured_shape(config: IonConfiguration) -> ShapeStats:
    """Aspect ratio and lattice-spacing statistics of a relaxed crystal."""
    pos = config.positions
    r_extent = float(np.max(np.hypot(pos[:, 0], pos[:, 1])))
    z_extent = float(np.max(np.abs(pos[:, 2])))
    nn = _nearest_neighbor_distances(pos) if config.ion_count > 1 else np.array([0.0])
    q75, q25 = np.percentile(nn, [75.0, 25.0])
    return ShapeStats(
        alpha_md=z_extent / r_extent if r_extent > 0.0 else 0.0,
        r_extent=r_extent,
        z_extent=z_extent,
        spacing_median=float(np.median(nn)),
        spacing_spread=float(q75 - q25),
        low_confidence=config.ion_count < 20,
    )


def write_configuration_csv(config: IonConfiguration, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["ion_index", "x_m", "y_m", "z_m"])
        for i, row in enumerate(config.positions):
            writer.writerow([i] + [repr(float(v)) for v in row])


def write_report_json(report: ConvergenceReport, path, extra: dict | None = None) -> None:
    payload = report.as_dict()
    if extra:
        payload.update(extra)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
