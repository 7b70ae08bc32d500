import math

import numpy as np
import pytest

from casimag.asymptotics import (ZETA3, Regime, asymptotic_for_pair, classify, drude_intermediate,
                                 drude_long, drude_short, fit_loglog_slope, oscillator_short,
                                 realistic_long, realistic_short, short_distance_weight)
from casimag.casimir import MirrorPair, delta_energy_perturbative, delta_force
from casimag.errors import InputError, RegimeError, ValidityWarning
from casimag.materials import (PRESETS, DcTransportParams, DrudeParams, MaterialModel, OscillatorParams,
                               load_spectrum)
from casimag.units import C, HBAR

from conftest import OMEGA_P, drude_model

METAL = drude_model().params
C_TAU = C * METAL.tau
C_OVER_WP = C / OMEGA_P
PERMALLOY = DcTransportParams(sigma=3.6e16, theta=5e-3)


def central_difference(fn, D):
    h = 1e-5 * D
    return -(fn(D + h) - fn(D - h)) / (2.0 * h)


class TestClassify:
    def test_long(self):
        info = classify(METAL, 100.0 * C_TAU)
        assert info.regime is Regime.LONG_DRUDE
        assert info.margin_relaxation == pytest.approx(100.0)

    def test_intermediate(self):
        info = classify(METAL, math.sqrt(C_TAU * C_OVER_WP))
        assert info.regime is Regime.INTERMEDIATE_DRUDE
        assert info.window == (pytest.approx(C_OVER_WP), pytest.approx(C_TAU))

    def test_short(self):
        info = classify(METAL, 0.01 * C_OVER_WP)
        assert info.regime is Regime.SHORT_DRUDE
        assert info.margin_plasma == pytest.approx(0.01)

    def test_near_boundary_warns(self):
        with pytest.warns(ValidityWarning, match="boundary"):
            classify(METAL, 1.5 * C_TAU)

    def test_rejects_bad_distance(self):
        with pytest.raises(InputError):
            classify(METAL, -1.0)


class TestClosedForms:
    def test_long_scaling(self):
        D = 100.0 * C_TAU
        base = drude_long(METAL, D)
        assert drude_long(METAL, 2.0 * D).delta_e == pytest.approx(base.delta_e / 16.0, rel=1e-12)
        assert drude_long(METAL, 2.0 * D).delta_f == pytest.approx(base.delta_f / 32.0, rel=1e-12)
        doubled = DrudeParams(METAL.omega_p, 2.0 * METAL.omega_c, METAL.tau)
        assert drude_long(doubled, D).delta_e == pytest.approx(4.0 * base.delta_e, rel=1e-12)

    def test_long_prefactor(self):
        D = 100.0 * C_TAU
        expected = (-3.0 * ZETA3 / (16.0 * math.pi ** 2) * HBAR * C ** 2 / D ** 4
                    * METAL.omega_c ** 2 * METAL.tau / METAL.omega_p ** 2)
        assert drude_long(METAL, D).delta_e == pytest.approx(expected, rel=1e-12)

    def test_intermediate_ignores_relaxation_time(self):
        a = DrudeParams(omega_p=1e16, omega_c=1e7, tau=1e-10)
        b = DrudeParams(omega_p=1e16, omega_c=1e7, tau=1e-9)
        assert drude_intermediate(a, 1e-3) == drude_intermediate(b, 1e-3)

    def test_short_force_ignores_cutoff(self):
        D = 0.01 * C_OVER_WP
        a = drude_short(METAL, D)
        b = drude_short(METAL, D, omega_star=10.0 * OMEGA_P)
        assert a.delta_f == b.delta_f
        assert a.delta_e != b.delta_e
        assert a.cutoff_used == OMEGA_P

    def test_short_log_offset_shifts_energy(self):
        D = 0.01 * C_OVER_WP
        plain = drude_short(METAL, D)
        shifted = drude_short(METAL, D, log_offset=1.0)
        assert shifted.delta_e - plain.delta_e == pytest.approx(plain.delta_f * D, rel=1e-12)

    def test_cutoff_must_be_positive(self):
        with pytest.raises(InputError):
            drude_short(METAL, 0.01 * C_OVER_WP, omega_star=0.0)

    def test_formula_used_out_of_regime_warns(self):
        with pytest.warns(ValidityWarning, match="LongDrude"):
            drude_long(METAL, 0.01 * C_OVER_WP)

    @pytest.mark.filterwarnings("ignore::casimag.errors.ValidityWarning")
    def test_long_and_intermediate_meet_at_relaxation_length(self):
        ratio = drude_long(METAL, C_TAU).delta_e / drude_intermediate(METAL, C_TAU).delta_e
        assert 1.0 / 3.0 < ratio < 3.0

    def test_realistic_long(self):
        D = 0.3
        result = realistic_long(PERMALLOY, PERMALLOY, D)
        assert result.delta_f * D / result.delta_e == pytest.approx(4.0, rel=1e-14)
        expected_force = -3.0 * ZETA3 / (16.0 * math.pi ** 3) * HBAR * C ** 2 * 5e-3 ** 2 / (3.6e16 * D ** 5)
        assert result.delta_f == pytest.approx(expected_force, rel=1e-12)
        opposite = DcTransportParams(sigma=3.6e16, theta=-5e-3)
        assert realistic_long(PERMALLOY, opposite, D).delta_e == -result.delta_e

    def test_oscillator_scaling(self, film):
        doubled = OscillatorParams(film.omega_0, film.eps_xx_eff, 2.0 * film.eps_xy_eff)
        assert (oscillator_short(doubled, doubled, 1e-6).delta_f
                == pytest.approx(4.0 * oscillator_short(film, film, 1e-6).delta_f, rel=1e-12))
        near = oscillator_short(film, film, 1e-6)
        far = oscillator_short(film, film, 4e-6)
        assert near.delta_f * 1e-6 == pytest.approx(far.delta_f * 4e-6, rel=1e-12)

    def test_oscillator_beyond_line_wavelength_warns(self, film):
        with pytest.warns(ValidityWarning):
            oscillator_short(film, film, 6e-6)

    def test_oscillator_headline_numbers(self, film):
        # sphere of R = 100 um at D = 50 nm
        with pytest.warns(ValidityWarning):
            result = oscillator_short(film, film, 5e-6, log_offset=1.0)
        force_fN = abs(2.0 * math.pi * 1e-2 * result.delta_e) * 1e-5 / 1e-15
        assert 5.0 < force_fN < 20.0


@pytest.mark.parametrize("formula, D", [
    (lambda D: drude_long(METAL, D), 100.0 * C_TAU),
    (lambda D: drude_intermediate(METAL, D), math.sqrt(C_TAU * C_OVER_WP)),
    (lambda D: drude_short(METAL, D, log_offset=0.5), 0.01 * C_OVER_WP),
    (lambda D: realistic_long(PERMALLOY, PERMALLOY, D), 0.3),
    (lambda D: oscillator_short(PRESETS["transition_metal_line"], PRESETS["transition_metal_line"], D), 1e-6),
], ids=["long", "intermediate", "short", "realistic-long", "oscillator"])
def test_force_is_minus_energy_derivative(formula, D):
    numeric = central_difference(lambda d: formula(d).delta_e, D)
    assert formula(D).delta_f == pytest.approx(numeric, rel=1e-8)


class TestShortDistanceIntegral:
    def test_reproduces_single_line_formula(self, film):
        model = MaterialModel(film)
        general = realistic_short(model, model, 1e-6)
        line = oscillator_short(film, film, 1e-6)
        assert general.delta_f == pytest.approx(line.delta_f, rel=1e-6)
        assert general.delta_e == pytest.approx(line.delta_e, rel=1e-6)

    def test_no_hall_response_gives_zero(self):
        plain = MaterialModel(OscillatorParams(omega_0=6e15, eps_xx_eff=10.0, eps_xy_eff=0.0))
        assert short_distance_weight(plain, plain) == 0.0
        assert realistic_short(plain, plain, 1e-6).delta_f == 0.0

    def test_agrees_with_drude_short(self, drude_metal):
        D = 0.01 * C_OVER_WP
        general = realistic_short(drude_metal, drude_metal, D)
        assert general.delta_f == pytest.approx(drude_short(METAL, D).delta_f, rel=1e-2)

    def test_dc_material_has_no_short_limit(self):
        dc = MaterialModel(PERMALLOY)
        with pytest.raises(RegimeError):
            short_distance_weight(dc, dc)

    def test_tabulated_spectrum(self, data_dir):
        model = MaterialModel(load_spectrum(data_dir / "sample_spectrum.dat"))
        result = realistic_short(model, model, 1e-6)
        assert result.delta_f < 0
        assert result.cutoff_used == pytest.approx(3e16)


class TestPairDispatch:
    def test_reversed_mirror_flips_sign(self, drude_metal):
        D = 100.0 * C_TAU
        same = asymptotic_for_pair(MirrorPair(drude_metal, drude_metal), D)
        flipped = asymptotic_for_pair(MirrorPair(drude_metal, drude_metal.reversed()), D)
        assert same.delta_e < 0
        assert flipped.delta_e == -same.delta_e
        assert flipped.formula_id == "LongDrude"

    def test_oscillator_pair(self, film_pair):
        assert asymptotic_for_pair(film_pair, 1e-6).formula_id == "OscillatorShort"

    def test_dc_pair(self):
        dc = MaterialModel(PERMALLOY)
        assert asymptotic_for_pair(MirrorPair(dc, dc), 0.3).formula_id == "LongRealistic"

    def test_mixed_pair_uses_frequency_integral(self, drude_metal, film):
        pair = MirrorPair(drude_metal, MaterialModel(film))
        assert asymptotic_for_pair(pair, 1e-7).formula_id == "ShortRealistic"

    def test_unequal_drude_mirrors_between_regimes(self, drude_metal):
        other = drude_model(omega_p=2e16)
        with pytest.raises(RegimeError):
            asymptotic_for_pair(MirrorPair(drude_metal, other), math.sqrt(C_TAU * C_OVER_WP))


class TestQuadratureAgainstLimits:
    """Numeric magnetic force and energy against the closed forms, regime by regime."""

    def test_long_distance(self, drude_pair, cfg):
        D = 100.0 * C_TAU
        numeric = delta_energy_perturbative(drude_pair, D, cfg).value
        assert numeric == pytest.approx(drude_long(METAL, D).delta_e, rel=0.1)

    def test_long_distance_slope(self, drude_pair, cfg):
        distances = C_TAU * np.logspace(2.5, 3.5, 3)
        forces = [delta_force(drude_pair, D, cfg).value for D in distances]
        assert fit_loglog_slope(distances, forces) == pytest.approx(-5.0, abs=0.05)

    def test_intermediate_distance(self, clean_metal, cfg):
        pair = MirrorPair(clean_metal, clean_metal)
        params = clean_metal.params
        midpoint = math.sqrt(C * params.tau * C / params.omega_p)
        numeric = delta_energy_perturbative(pair, midpoint, cfg).value
        assert numeric == pytest.approx(drude_intermediate(params, midpoint).delta_e, rel=0.05)
        distances = midpoint * np.logspace(-0.5, 0.5, 3)
        forces = [delta_force(pair, D, cfg).value for D in distances]
        assert fit_loglog_slope(distances, forces) == pytest.approx(-4.0, abs=0.05)

    def test_short_distance_closed_form_slope(self):
        distances = C_OVER_WP * np.logspace(-3.5, -2.5, 3)
        forces = [drude_short(METAL, D).delta_f for D in distances]
        assert fit_loglog_slope(distances, forces) == pytest.approx(-1.0, abs=1e-12)

    def test_short_distance_exceeds_closed_form(self, drude_pair, cfg):
        # the closed form drops the p-wave multiple reflections below omega_p, where r_pp -> 1
        D = 0.01 * C_OVER_WP
        numeric = delta_force(drude_pair, D, cfg).value
        closed = drude_short(METAL, D).delta_f
        assert numeric < 2.0 * closed < 0

    def test_short_distance_is_steeper_than_closed_form(self, drude_pair, cfg):
        distances = C_OVER_WP * np.logspace(-2.5, -1.5, 3)
        forces = [delta_force(drude_pair, D, cfg).value for D in distances]
        assert -2.0 < fit_loglog_slope(distances, forces) < -1.1

    def test_dc_transport_large_distance(self, cfg):
        dc = MaterialModel(DcTransportParams(sigma=3.6e16, theta=5e-3, tau_equiv=1e-14))
        pair = MirrorPair(dc, dc)
        numeric = delta_force(pair, 0.3, cfg).value
        assert numeric == pytest.approx(realistic_long(PERMALLOY, PERMALLOY, 0.3).delta_f, rel=0.1)


def test_slope_of_exact_power_law():
    d = np.array([1.0, 2.0, 4.0, 8.0])
    assert fit_loglog_slope(d, -3.0 * d ** -3) == pytest.approx(-3.0, rel=1e-12)


def test_slope_needs_two_points():
    with pytest.raises(InputError):
        fit_loglog_slope([1.0], [1.0])
