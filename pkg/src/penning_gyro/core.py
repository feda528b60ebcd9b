"""Ion species, static trap configuration, and shared physical constants.

Everything in here is immutable after construction and safe to share
across concurrent sweep workers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalConstants:
    """Pinned CODATA-2018 values. Printed by the CLI ``constants`` command
    so numeric drift between environments is auditable."""

    elementary_charge: float = 1.602176634e-19     # C (exact)
    atomic_mass_unit: float = 1.66053906660e-27    # kg
    vacuum_permittivity: float = 8.8541878128e-12  # F/m
    reduced_planck: float = 1.054571817e-34        # J s (exact)
    euler_number: float = math.e

    def __post_init__(self):
        for name, value in self.as_dict().items():
            if not value > 0.0:
                raise ValueError(f"constant {name} must be positive")

    def as_dict(self) -> dict[str, float]:
        return {
            "elementary_charge": self.elementary_charge,
            "atomic_mass_unit": self.atomic_mass_unit,
            "vacuum_permittivity": self.vacuum_permittivity,
            "reduced_planck": self.reduced_planck,
            "euler_number": self.euler_number,
        }


CONST = PhysicalConstants()

# Coulomb constant, q-independent prefactor of the pair potential
K_COULOMB = 1.0 / (4.0 * math.pi * CONST.vacuum_permittivity)


@dataclass(frozen=True)
class IonSpecies:
    name: str
    mass: float    # kg
    charge: float  # C

    def __post_init__(self):
        if not self.mass > 0.0:
            raise ValueError("ion mass must be positive")
        if self.charge == 0.0:
            raise ValueError("ion charge must be nonzero")


# Bare atomic mass of 40Ca; no electron-mass correction is applied
# (relative effect < 2e-5, below every tolerance used downstream).
CA40 = IonSpecies(
    name="Ca+",
    mass=39.9626 * CONST.atomic_mass_unit,
    charge=+CONST.elementary_charge,
)

SPECIES_REGISTRY: dict[str, IonSpecies] = {"Ca+": CA40}


@dataclass(frozen=True)
class TrapConfig:
    """Static axial magnetic field (+z) plus quadrupole electric trap."""

    b_field: float          # T
    trap_voltage: float     # V
    char_length_z0: float   # m

    def __post_init__(self):
        if not self.b_field > 0.0:
            raise ValueError("b_field must be positive")
        if not self.trap_voltage > 0.0:
            raise ValueError("trap_voltage must be positive")
        if not self.char_length_z0 > 0.0:
            raise ValueError("char_length_z0 must be positive")


@dataclass(frozen=True)
class RotationInput:
    """Angular-velocity input about the x axis (the measurand)."""

    omega_x: float = 0.0  # rad/s; may be zero or negative

    def __post_init__(self):
        if not math.isfinite(self.omega_x):
            raise ValueError("omega_x must be finite")


def cyclotron_frequency(species: IonSpecies, trap: TrapConfig) -> float:
    """True cyclotron angular frequency qB/m in rad/s."""
    return abs(species.charge) * trap.b_field / species.mass


def axial_frequency_squared(species: IonSpecies, trap: TrapConfig) -> float:
    """omega_z^2 = qV/(m z0^2) in (rad/s)^2."""
    return (abs(species.charge) * trap.trap_voltage
            / (species.mass * trap.char_length_z0 ** 2))


def axial_frequency(species: IonSpecies, trap: TrapConfig) -> float:
    return math.sqrt(axial_frequency_squared(species, trap))


def axial_spring_constant(species: IonSpecies, trap: TrapConfig) -> float:
    """Mechanical axial spring constant k_z = m * omega_z^2 = qV/z0^2, N/m.

    This is the mechanical definition, so omega_z = sqrt(k_z/m) holds
    exactly.  The alternative electrical-curvature reading
    (omega_z = sqrt(q k_z / m), i.e. k_z = V/z0^2) is intentionally not
    used anywhere; the mechanical one keeps the driven-oscillator
    transfer function dimensionally consistent.
    """
    return abs(species.charge) * trap.trap_voltage / trap.char_length_z0 ** 2


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    margin: float    # rad/s, omega_c/sqrt(2) - omega_z
    omega_z: float   # rad/s
    omega_c: float   # rad/s


def validate_stability(species: IonSpecies, trap: TrapConfig) -> StabilityReport:
    """Axial confinement must stay below the radial-defocusing bound.

    Trapping is stable iff omega_z < omega_c/sqrt(2); the report carries
    the signed margin instead of raising so sweeps can emit gap markers.
    """
    omega_c = cyclotron_frequency(species, trap)
    omega_z = axial_frequency(species, trap)
    bound = omega_c / math.sqrt(2.0)
    return StabilityReport(
        stable=omega_z < bound,
        margin=bound - omega_z,
        omega_z=omega_z,
        omega_c=omega_c,
    )


def max_stable_voltage(species: IonSpecies, b_field: float, z0: float) -> float:
    """Voltage at which omega_z = omega_c/sqrt(2) exactly (instability edge)."""
    omega_c = abs(species.charge) * b_field / species.mass
    return species.mass * z0 ** 2 * omega_c ** 2 / (2.0 * abs(species.charge))
