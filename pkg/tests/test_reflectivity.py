import math

import numpy as np
import pytest

from casimag.errors import InputError, RegimeError
from casimag.materials import (PRESETS, DrudeParams, MaterialModel, OscillatorParams, PerfectMirror,
                               Vacuum)
from casimag.reflectivity import KPoint, fresnel_terms, reflection_limit_check, reflection_matrix
from casimag.units import C


def drude(omega_p, omega_c, tau, sign=1):
    return MaterialModel(DrudeParams(omega_p=omega_p, omega_c=omega_c, tau=tau), magnetization_sign=sign)


def point(omega, kc):
    return KPoint(omega=omega, k_perp=kc / C)


def test_vacuum_does_not_reflect():
    r = reflection_matrix(MaterialModel(Vacuum()), point(1e15, 2e15))
    assert (r.r_ss, r.r_pp, r.r_sp) == (0.0, 0.0, 0.0)


def test_perfect_mirror():
    r = reflection_matrix(MaterialModel(PerfectMirror()), point(1e15, 2e15))
    assert (r.r_ss, r.r_pp, r.r_sp) == (-1.0, 1.0, 0.0)


def test_grazing_on_dielectric_of_four():
    # eps_xx = 4 at omega = omega_0 and omega = k_perp c
    line = MaterialModel(OscillatorParams(omega_0=1e15, eps_xx_eff=3.0 * math.pi, eps_xy_eff=0.0))
    r = reflection_matrix(line, point(1e15, 1e15))
    assert r.r_ss == pytest.approx(-1.0 / 3.0, rel=1e-12)
    assert r.r_pp == pytest.approx(1.0 / 3.0, rel=1e-12)
    assert r.r_sp == 0.0


def test_good_conductor_approaches_perfect_mirror():
    r = reflection_matrix(drude(1e20, 0.0, 1e-10), point(1e12, 2e12))
    assert r.r_ss == pytest.approx(-1.0, abs=1e-6)
    assert r.r_pp == pytest.approx(1.0, abs=1e-6)


def test_off_diagonal_is_symmetric():
    r = reflection_matrix(MaterialModel(PRESETS["drude_demo"]), point(1e14, 1e15))
    assert r.r_ps == r.r_sp
    assert r.as_array()[0, 1] == r.as_array()[1, 0]


def test_magnetization_reversal_flips_only_r_sp():
    forward = MaterialModel(PRESETS["drude_demo"])
    p = point(3e14, 1e15)
    a = reflection_matrix(forward, p)
    b = reflection_matrix(forward.reversed(), p)
    assert (b.r_ss, b.r_pp, b.r_sp) == (a.r_ss, a.r_pp, -a.r_sp)


@pytest.mark.parametrize("name", ["drude_demo", "permalloy_dc", "transition_metal_line"])
def test_diagonal_coefficients_are_bounded(name):
    rng = np.random.default_rng(11)
    kc = 10.0 ** rng.uniform(10, 19, 500)
    omega = kc * rng.uniform(1e-4, 1.0, 500)
    terms = fresnel_terms(MaterialModel(PRESETS[name]), omega, kc)
    assert np.all((terms.r_ss <= 0) & (terms.r_ss >= -1))
    assert np.all((terms.r_pp >= 0) & (terms.r_pp <= 1))
    np.testing.assert_allclose(terms.one_plus_rss, 1.0 + terms.r_ss, atol=1e-12)
    np.testing.assert_allclose(terms.one_minus_rpp, 1.0 - terms.r_pp, atol=1e-12)


def test_line_preset_has_small_kerr_coefficient():
    # k_perp c above 1e14 s^-1 covers every u >= 0.03 at D = 50 nm
    rng = np.random.default_rng(3)
    kc = 10.0 ** rng.uniform(14, 18, 400)
    omega = kc * rng.uniform(1e-4, 1.0, 400)
    terms = fresnel_terms(MaterialModel(PRESETS["transition_metal_line"]), omega, kc)
    assert np.max(np.abs(terms.r_sp)) < 0.1


_rng = np.random.default_rng(5)
_KC = 10.0 ** _rng.uniform(12.0, 18.0, 8)
_CONTINUITY_POINTS = list(zip(_KC * _rng.uniform(1e-3, 0.9, 8), _KC))


@pytest.mark.parametrize("omega, kc", _CONTINUITY_POINTS)
def test_coefficients_are_continuous(omega, kc):
    model = MaterialModel(PRESETS["drude_demo"])
    a = reflection_matrix(model, point(omega, kc))
    b = reflection_matrix(model, point(omega * (1.0 + 1e-7), kc))
    assert b.r_sp == pytest.approx(a.r_sp, rel=1e-5)
    assert b.r_ss == pytest.approx(a.r_ss, rel=1e-5)
    assert b.r_pp == pytest.approx(a.r_pp, rel=1e-5)


class TestKPoint:
    def test_frequency_above_light_line_is_rejected(self):
        with pytest.raises(InputError):
            KPoint(omega=2e15, k_perp=1e15 / C)

    @pytest.mark.parametrize("omega, k_perp", [(0.0, 1.0), (1.0, 0.0), (-1.0, 1.0)])
    def test_non_positive_values_are_rejected(self, omega, k_perp):
        with pytest.raises(InputError):
            KPoint(omega=omega, k_perp=k_perp)

    def test_light_line_itself_is_allowed(self):
        assert KPoint(omega=1e15, k_perp=1e15 / C).kc == pytest.approx(1e15)


class TestDrudeLimits:
    def test_long_window(self):
        model = drude(1e16, 1e10, 1e-13)
        p = point(1e9, 1e10)
        limit = reflection_limit_check(model, "long", p)
        exact = reflection_matrix(model, p)
        assert limit.r_sp == pytest.approx(-1e-8, rel=1e-12)
        assert exact.r_sp == pytest.approx(limit.r_sp, rel=2e-2)
        assert exact.r_ss == pytest.approx(-1.0, abs=1e-3)

    def test_intermediate_window(self):
        model = drude(1e16, 1e6, 1e-9)
        p = point(3e12, 5e12)
        limit = reflection_limit_check(model, "intermediate", p)
        exact = reflection_matrix(model, p)
        assert limit.r_sp == pytest.approx(-1e-10, rel=1e-12)
        assert exact.r_sp == pytest.approx(limit.r_sp, rel=2e-2)

    def test_short_window(self):
        model = drude(1e16, 1e8, 1e-11)
        p = point(1e15, 1e18)
        limit = reflection_limit_check(model, "short", p)
        exact = reflection_matrix(model, p)
        assert exact.r_sp == pytest.approx(limit.r_sp, rel=2e-2)
        assert exact.r_ss == pytest.approx(limit.r_ss, rel=2e-2)
        assert exact.r_pp == pytest.approx(limit.r_pp, rel=2e-2)

    def test_short_window_far_above_plasma_frequency(self):
        model = drude(1e16, 1e8, 1e-11)
        omega, kc = 1e17, 1e20
        limit = reflection_limit_check(model, "short", point(omega, kc))
        assert limit.r_sp == pytest.approx(-1e32 * 1e8 / (4.0 * kc * omega ** 2), rel=1e-2)

    def test_limit_carries_magnetization_sign(self):
        p = point(3e12, 5e12)
        up = reflection_limit_check(drude(1e16, 1e6, 1e-9), "intermediate", p)
        down = reflection_limit_check(drude(1e16, 1e6, 1e-9, sign=-1), "intermediate", p)
        assert down.r_sp == -up.r_sp

    def test_point_outside_window(self):
        with pytest.raises(RegimeError, match="outside"):
            reflection_limit_check(drude(1e16, 1e10, 1e-13), "intermediate", point(1e9, 1e10))

    def test_unknown_regime(self):
        with pytest.raises(RegimeError):
            reflection_limit_check(drude(1e16, 1e10, 1e-13), "ultraviolet", point(1e9, 1e10))

    def test_needs_drude_mirror(self):
        with pytest.raises(RegimeError):
            reflection_limit_check(MaterialModel(PRESETS["transition_metal_line"]), "long", point(1e9, 1e10))
