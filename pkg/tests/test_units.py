import math

import pytest

from casimag import units
from casimag.errors import ConfigError, UnitError
from casimag.units import Dimension, Quantity, parse_quantity


def test_c_over_line_frequency_is_about_fifty_nanometres():
    assert units.C / 6e15 == pytest.approx(5e-6, rel=1e-3)


def test_natural_constants_are_unity():
    assert (units.NATURAL.hbar, units.NATURAL.c, units.NATURAL.k_B) == (1.0, 1.0, 1.0)


@pytest.mark.parametrize("sigma_si, expected", [(1.11e-10, 1.0), (1.0e7, 9e16)])
def test_conductivity_conversion(sigma_si, expected):
    assert units.si_conductivity_to_gaussian(sigma_si) == pytest.approx(expected, rel=1e-2)


def test_zero_conductivity():
    assert units.si_conductivity_to_gaussian(0.0) == 0.0


def test_negative_conductivity_is_rejected():
    with pytest.raises(ConfigError):
        units.si_conductivity_to_gaussian(-1.0)


@pytest.mark.parametrize("dyn, newton", [(0.0, 0.0), (1e5, 1.0), (1e-9, 1e-14)])
def test_newton_from_dyne(dyn, newton):
    assert units.newton_from_gaussian_force(dyn) == pytest.approx(newton, rel=1e-15)


@pytest.mark.parametrize("dimension", list(Dimension))
def test_si_conversion_inverts(dimension):
    value = 3.7e-11
    back = units.gaussian_from_si(units.si_from_gaussian(value, dimension), dimension)
    assert back == pytest.approx(value, rel=1e-12)


def test_pressure_times_area_is_force():
    force = Quantity(2.0, Dimension.FORCE_PER_AREA) * Quantity(3.0, Dimension.AREA)
    assert force == Quantity(6.0, Dimension.FORCE)


def test_energy_per_area_over_length_is_pressure():
    pressure = Quantity(8.0, Dimension.ENERGY_PER_AREA) / Quantity(2.0, Dimension.LENGTH)
    assert pressure.dimension is Dimension.FORCE_PER_AREA
    assert pressure.value == 4.0


def test_mismatched_addition_raises():
    with pytest.raises(UnitError):
        Quantity(1.0, Dimension.FORCE) + Quantity(1.0, Dimension.LENGTH)


def test_undefined_product_raises():
    with pytest.raises(UnitError):
        Quantity(1.0, Dimension.FORCE) * Quantity(1.0, Dimension.FREQUENCY)


def test_quantity_to_si():
    assert Quantity(1e5, Dimension.FORCE).to_si() == pytest.approx(1.0)


@pytest.mark.parametrize("value, kind, expected", [
    ("50 nm", "length", 5e-6),
    (0.5, "length", 50.0),
    ("1 mN/m", "stiffness", 1.0),
    ("1.4 kHz", "ordinary_frequency", 1400.0),
    ("1 Hz", "frequency", 2.0 * math.pi),
    ("6e15 1/s", "frequency", 6e15),
    ("1 aN", "force", 1e-13),
    ("10 fs", "time", 1e-14),
    ("1 T", "field", 1e4),
])
def test_parse_quantity(value, kind, expected):
    assert parse_quantity(value, kind) == pytest.approx(expected, rel=1e-12)


def test_bare_numbers_in_gaussian_mode_pass_through():
    assert parse_quantity(5e-6, "length", units_in="gaussian") == 5e-6


def test_electron_volt_frequency():
    assert parse_quantity("1 eV", "frequency") == pytest.approx(1.519e15, rel=1e-3)


@pytest.mark.parametrize("value, kind", [("3 furlongs", "length"), ("fast", "frequency"),
                                         (True, "length"), ([1], "length")])
def test_unreadable_quantities_raise(value, kind):
    with pytest.raises(ConfigError):
        parse_quantity(value, kind)
