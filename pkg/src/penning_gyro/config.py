"""Flat key=value run configuration shared by every CLI subcommand.

The file format is intentionally plain: one ``key = value`` per line,
``#`` comments, everything else rejected.  CLI ``--set key=value`` flags
override file values which override the built-in defaults (the 1 T /
100 V / z0 = 1 cm Ca+ operating point with the wall locked to the axial
frequency).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields

from .core import SPECIES_REGISTRY, IonSpecies, RotationInput, TrapConfig
from .modes import ModeFrequencies, compute_modes
from .shape import RotatingWallConfig


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    species: str = "Ca+"
    b_field_t: float = 1.0
    trap_voltage_v: float = 100.0
    char_length_m: float = 0.01
    omega_x_rad_s: float = 0.0
    # rotating wall: omega_r = wall_ratio * omega_z unless an absolute
    # frequency is given
    wall_ratio: float = 1.0
    wall_freq_rad_s: float = 0.0     # 0 means "use wall_ratio"
    wall_delta: float = 0.01
    # crystal size used for geometry; spin count used for the readout
    n_crystal: int = 1000
    n_spins: int = 10000
    q_factor: float = 1e6
    odf_force_n: float = 1e-22       # 100 yN
    decay_rate_hz: float = 100.0
    precession_s: float = 0.01
    cycle_s: float = 0.05
    # integrator
    time_step_s: float = 0.0         # 0 means T_fastest/200
    total_time_s: float = 2e-3
    sample_stride: int = 1
    method: str = "rk4"
    seed: int = 0

    def ion(self) -> IonSpecies:
        try:
            return SPECIES_REGISTRY[self.species]
        except KeyError:
            raise ConfigError(f"unknown species {self.species!r}; "
                              f"known: {sorted(SPECIES_REGISTRY)}") from None

    def trap(self) -> TrapConfig:
        try:
            return TrapConfig(b_field=self.b_field_t,
                              trap_voltage=self.trap_voltage_v,
                              char_length_z0=self.char_length_m)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def rotation(self) -> RotationInput:
        return RotationInput(omega_x=self.omega_x_rad_s)

    def modes(self) -> ModeFrequencies:
        return compute_modes(self.ion(), self.trap())

    def wall(self, modes: ModeFrequencies | None = None) -> RotatingWallConfig:
        if self.wall_freq_rad_s > 0.0:
            omega_r = self.wall_freq_rad_s
        else:
            if modes is None:
                modes = self.modes()
            omega_r = self.wall_ratio * modes.omega_z
        try:
            return RotatingWallConfig(omega_r=omega_r, delta=self.wall_delta)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    if kind in ("int",):
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"field {key!r} expects an integer, got {raw!r}") from None
    if kind in ("float",):
        try:
            value = float(raw)
        except ValueError:
            raise ConfigError(f"field {key!r} expects a number, got {raw!r}") from None
        if not math.isfinite(value):
            raise ConfigError(f"field {key!r} must be finite")
        return value
    return raw


def parse_config_text(text: str) -> dict:
    values: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown field {key!r}")
        values[key] = _coerce(key, raw)
    return values


def load_config(path: str | None, overrides: dict | None = None) -> RunConfig:
    values: dict = {}
    if path is not None:
        try:
            with open(path) as fh:
                values.update(parse_config_text(fh.read()))
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
    for key, raw in (overrides or {}).items():
        if key not in _FIELD_TYPES:
            raise ConfigError(f"unknown field {key!r}")
        values[key] = _coerce(key, raw) if isinstance(raw, str) else raw
    return RunConfig(**values)
