"""Physical constants and unit conversions.

Kernels compute in Gaussian-cgs (erg, dyn, cm, s, statC). SI only appears
where values enter or leave the program, through the helpers below.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum

from scipy import constants as sc

from .errors import ConfigError, UnitError

# Gaussian-cgs values of the constants the formulas use
HBAR = sc.hbar * 1e7                 # erg s
C = sc.c * 1e2                       # cm/s
K_B = sc.k * 1e7                     # erg/K
ELECTRON_CHARGE = sc.e * 10.0 * sc.c  # statC

# sigma_gaussian = sigma_si / (4 pi eps0)
_CONDUCTIVITY_SI_TO_GAUSSIAN = 1.0 / (4.0 * math.pi * sc.epsilon_0)
_EV_TO_ANGULAR = sc.e / sc.hbar


@dataclass(frozen=True)
class PhysicalConstants:
    """hbar, c and k_B in one coherent unit system."""
    hbar: float
    c: float
    k_B: float
    name: str = ""


GAUSSIAN = PhysicalConstants(hbar=HBAR, c=C, k_B=K_B, name="gaussian")
# hbar = c = k_B = 1; frequencies in whatever unit the caller picks
NATURAL = PhysicalConstants(hbar=1.0, c=1.0, k_B=1.0, name="natural")


class Dimension(Enum):
    ENERGY_PER_AREA = "energy-per-area"
    FORCE_PER_AREA = "force-per-area"
    FORCE = "force"
    FREQUENCY = "frequency"
    LENGTH = "length"
    AREA = "area"
    CONDUCTIVITY = "conductivity"
    DIMENSIONLESS = "dimensionless"


# Gaussian value times factor gives the SI value
_SI_FACTORS = {
    Dimension.ENERGY_PER_AREA: 1e-3,   # erg/cm^2 -> J/m^2
    Dimension.FORCE_PER_AREA: 1e-1,    # dyn/cm^2 -> Pa
    Dimension.FORCE: 1e-5,             # dyn -> N
    Dimension.FREQUENCY: 1.0,
    Dimension.LENGTH: 1e-2,            # cm -> m
    Dimension.AREA: 1e-4,              # cm^2 -> m^2
    Dimension.CONDUCTIVITY: 1.0 / _CONDUCTIVITY_SI_TO_GAUSSIAN,
    Dimension.DIMENSIONLESS: 1.0,
}

SI_UNIT_LABELS = {
    Dimension.ENERGY_PER_AREA: "J/m^2",
    Dimension.FORCE_PER_AREA: "Pa",
    Dimension.FORCE: "N",
    Dimension.FREQUENCY: "1/s",
    Dimension.LENGTH: "m",
    Dimension.AREA: "m^2",
    Dimension.CONDUCTIVITY: "S/m",
    Dimension.DIMENSIONLESS: "1",
}

_PRODUCTS = {
    (Dimension.FORCE_PER_AREA, Dimension.AREA): Dimension.FORCE,
    (Dimension.LENGTH, Dimension.LENGTH): Dimension.AREA,
    # proximity force: length times energy per area
    (Dimension.ENERGY_PER_AREA, Dimension.LENGTH): Dimension.FORCE,
}

_QUOTIENTS = {
    (Dimension.ENERGY_PER_AREA, Dimension.LENGTH): Dimension.FORCE_PER_AREA,
    (Dimension.FORCE, Dimension.AREA): Dimension.FORCE_PER_AREA,
    (Dimension.FORCE, Dimension.LENGTH): Dimension.ENERGY_PER_AREA,
    (Dimension.AREA, Dimension.LENGTH): Dimension.LENGTH,
}


@dataclass(frozen=True)
class Quantity:
    """A Gaussian-cgs value tagged with its dimension."""
    value: float
    dimension: Dimension

    def _same(self, other: "Quantity", op: str) -> None:
        if not isinstance(other, Quantity) or other.dimension is not self.dimension:
            other_dim = getattr(other, "dimension", type(other).__name__)
            raise UnitError(f"cannot {op} {self.dimension} and {other_dim}")

    def __add__(self, other: "Quantity") -> "Quantity":
        self._same(other, "add")
        return Quantity(self.value + other.value, self.dimension)

    def __sub__(self, other: "Quantity") -> "Quantity":
        self._same(other, "subtract")
        return Quantity(self.value - other.value, self.dimension)

    def __neg__(self) -> "Quantity":
        return Quantity(-self.value, self.dimension)

    def __mul__(self, other) -> "Quantity":
        if isinstance(other, (int, float)):
            return Quantity(self.value * other, self.dimension)
        if other.dimension is Dimension.DIMENSIONLESS:
            return Quantity(self.value * other.value, self.dimension)
        if self.dimension is Dimension.DIMENSIONLESS:
            return Quantity(self.value * other.value, other.dimension)
        key = (self.dimension, other.dimension)
        result = _PRODUCTS.get(key) or _PRODUCTS.get(key[::-1])
        if result is None:
            raise UnitError(f"no product defined for {self.dimension} and {other.dimension}")
        return Quantity(self.value * other.value, result)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Quantity":
        if isinstance(other, (int, float)):
            return Quantity(self.value / other, self.dimension)
        if other.dimension is self.dimension:
            return Quantity(self.value / other.value, Dimension.DIMENSIONLESS)
        if other.dimension is Dimension.DIMENSIONLESS:
            return Quantity(self.value / other.value, self.dimension)
        result = _QUOTIENTS.get((self.dimension, other.dimension))
        if result is None:
            raise UnitError(f"no quotient defined for {self.dimension} and {other.dimension}")
        return Quantity(self.value / other.value, result)

    def to_si(self) -> float:
        return si_from_gaussian(self.value, self.dimension)


def si_from_gaussian(value, dimension: Dimension):
    return value * _SI_FACTORS[dimension]


def gaussian_from_si(value, dimension: Dimension):
    return value / _SI_FACTORS[dimension]


def si_conductivity_to_gaussian(sigma_si: float) -> float:
    """Convert a conductivity in S/m to its Gaussian value in s^-1."""
    if sigma_si < 0:
        raise ConfigError(f"conductivity must be non-negative, got {sigma_si} S/m")
    return sigma_si * _CONDUCTIVITY_SI_TO_GAUSSIAN


def newton_from_gaussian_force(dyn: float) -> float:
    return dyn * 1e-5


# Suffix tables: factor to the Gaussian unit of each kind
_SUFFIXES = {
    "length": {"nm": 1e-7, "um": 1e-4, "µm": 1e-4, "mm": 1e-1, "cm": 1.0, "m": 1e2},
    "frequency": {
        "1/s": 1.0, "rad/s": 1.0, "s^-1": 1.0,
        "Hz": 2.0 * math.pi, "kHz": 2.0e3 * math.pi, "MHz": 2.0e6 * math.pi,
        "eV": _EV_TO_ANGULAR,
    },
    "ordinary_frequency": {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6},
    "conductivity": {
        "S/m": _CONDUCTIVITY_SI_TO_GAUSSIAN,
        "S/cm": 1e2 * _CONDUCTIVITY_SI_TO_GAUSSIAN,
        "1/s": 1.0, "s^-1": 1.0,
    },
    "stiffness": {"N/m": 1e3, "mN/m": 1.0, "dyn/cm": 1.0},
    "force": {"N": 1e5, "mN": 1e2, "nN": 1e-4, "pN": 1e-7, "fN": 1e-10, "aN": 1e-13, "dyn": 1.0},
    "time": {"s": 1.0, "ps": 1e-12, "fs": 1e-15},
    "temperature": {"K": 1.0},
    "mass": {"kg": 1e3, "g": 1.0},
    "density": {"1/m^3": 1e-6, "1/cm^3": 1.0},
    "field": {"T": 1e4, "G": 1.0},
    "dimensionless": {},
}

# Factor applied to a bare number given in SI
_SI_BASE = {
    "length": 1e2,
    "frequency": 1.0,
    "ordinary_frequency": 1.0,
    "conductivity": _CONDUCTIVITY_SI_TO_GAUSSIAN,
    "stiffness": 1e3,
    "force": 1e5,
    "time": 1.0,
    "temperature": 1.0,
    "mass": 1e3,
    "density": 1e-6,
    "field": 1e4,
    "dimensionless": 1.0,
}

_NUMBER_WITH_SUFFIX = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(\S*)\s*$")


def parse_quantity(value, kind: str, units_in: str = "si") -> float:
    """Convert a config value ("50 nm", 1.1e7, "1 mN/m") to Gaussian-cgs."""
    if kind not in _SUFFIXES:
        raise ConfigError(f"unknown quantity kind '{kind}'")
    if units_in not in ("si", "gaussian"):
        raise ConfigError(f"units must be 'si' or 'gaussian', got '{units_in}'")

    if isinstance(value, bool):
        raise ConfigError(f"expected a {kind}, got {value!r}")
    if isinstance(value, (int, float)):
        number, suffix = float(value), ""
    elif isinstance(value, str):
        match = _NUMBER_WITH_SUFFIX.match(value)
        if not match:
            raise ConfigError(f"cannot read {kind} from '{value}'")
        number, suffix = float(match.group(1)), match.group(2)
    else:
        raise ConfigError(f"expected a {kind}, got {value!r}")

    if not suffix:
        return number if units_in == "gaussian" else number * _SI_BASE[kind]
    factor = _SUFFIXES[kind].get(suffix)
    if factor is None:
        known = ", ".join(_SUFFIXES[kind]) or "none"
        raise ConfigError(f"unknown unit '{suffix}' for {kind} (known: {known})")
    return number * factor
