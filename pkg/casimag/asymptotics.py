"""Closed-form limits of the magnetic energy and force, and regime classification.

Every energy here pairs with its force through dF = -d(dE)/dD. Formulas
carrying ln(c/(omega_star D)) accept `log_offset`, the additive constant
inside the logarithm that the leading-order derivation leaves open.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy.integrate import quad
from scipy.special import zeta

from .errors import InputError, RegimeError, ValidityWarning
from .materials import (DcTransportParams, DrudeParams, MaterialModel, OscillatorParams,
                        PerfectMirror, TabulatedSpectrum, Vacuum, eps_xx, eps_xy)
from .units import GAUSSIAN, PhysicalConstants

logger = logging.getLogger(__name__)

ZETA3 = float(zeta(3.0))
_BOUNDARY_FACTOR = 3.0


class Regime(Enum):
    LONG_DRUDE = "LongDrude"
    INTERMEDIATE_DRUDE = "IntermediateDrude"
    SHORT_DRUDE = "ShortDrude"
    LONG_REALISTIC = "LongRealistic"
    SHORT_REALISTIC = "ShortRealistic"
    OSCILLATOR_SHORT = "OscillatorShort"


@dataclass(frozen=True)
class RegimeInfo:
    regime: Regime
    window: tuple[float, float]
    margin_relaxation: float  # D / (c tau)
    margin_plasma: float      # D omega_p / c


@dataclass(frozen=True)
class AsymptoticResult:
    delta_e: float
    delta_f: float
    formula_id: str
    cutoff_used: Optional[float] = None


def _check_distance(D: float) -> None:
    if not (D > 0 and math.isfinite(D)):
        raise InputError(f"distance must be positive, got {D}")


def classify(params: DrudeParams, D: float, constants: PhysicalConstants = GAUSSIAN) -> RegimeInfo:
    """Long (D > c tau), intermediate (c/omega_p < D < c tau) or short (D < c/omega_p)."""
    _check_distance(D)
    c_tau = constants.c * params.tau
    c_over_wp = constants.c / params.omega_p
    margin_relaxation = D / c_tau
    margin_plasma = D / c_over_wp

    if D >= c_tau:
        info = RegimeInfo(Regime.LONG_DRUDE, (c_tau, math.inf), margin_relaxation, margin_plasma)
    elif D >= c_over_wp:
        info = RegimeInfo(Regime.INTERMEDIATE_DRUDE, (c_over_wp, c_tau), margin_relaxation, margin_plasma)
    else:
        info = RegimeInfo(Regime.SHORT_DRUDE, (0.0, c_over_wp), margin_relaxation, margin_plasma)

    near = [m for m in (margin_relaxation, margin_plasma)
            if 1.0 / _BOUNDARY_FACTOR < m < _BOUNDARY_FACTOR]
    if near:
        warnings.warn(f"D = {D:.4g} lies within a factor {_BOUNDARY_FACTOR:g} of a regime "
                      f"boundary; {info.regime.value} limits are rough there",
                      ValidityWarning, stacklevel=2)
    return info


def _expect_regime(params, D, expected: Regime, constants) -> None:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ValidityWarning)
        found = classify(params, D, constants).regime
    if found is not expected:
        warnings.warn(f"{expected.value} formula used at D = {D:.4g}, which is {found.value}",
                      ValidityWarning, stacklevel=3)


def drude_long(params: DrudeParams, D: float,
               constants: PhysicalConstants = GAUSSIAN) -> AsymptoticResult:
    """D >> c tau: dE = -(3 zeta(3)/16 pi^2)(hbar c^2/D^4)(omega_c^2 tau/omega_p^2)."""
    _expect_regime(params, D, Regime.LONG_DRUDE, constants)
    hbar, c = constants.hbar, constants.c
    delta_e = (-3.0 * ZETA3 / (16.0 * math.pi ** 2) * hbar * c ** 2 / D ** 4
               * params.omega_c ** 2 * params.tau / params.omega_p ** 2)
    return AsymptoticResult(delta_e, 4.0 * delta_e / D, Regime.LONG_DRUDE.value)


def drude_intermediate(params: DrudeParams, D: float,
                       constants: PhysicalConstants = GAUSSIAN) -> AsymptoticResult:
    """c/omega_p << D << c tau: r_sp is the constant -omega_c/omega_p."""
    _expect_regime(params, D, Regime.INTERMEDIATE_DRUDE, constants)
    ratio = (params.omega_c / params.omega_p) ** 2
    hbar_c = constants.hbar * constants.c
    return AsymptoticResult(-hbar_c * ratio / (24.0 * D ** 3), -hbar_c * ratio / (8.0 * D ** 4),
                            Regime.INTERMEDIATE_DRUDE.value)


def _log_factor(D, omega_star, log_offset, constants) -> float:
    if not omega_star > 0:
        raise InputError(f"omega_star must be positive, got {omega_star}")
    return math.log(constants.c / (omega_star * D)) + log_offset


def drude_short(params: DrudeParams, D: float, omega_star: Optional[float] = None,
                log_offset: float = 0.0,
                constants: PhysicalConstants = GAUSSIAN) -> AsymptoticResult:
    """D << c/omega_p: dF = -(1/16 pi sqrt 2)(hbar/c^2 D) omega_c^2 omega_p."""
    _expect_regime(params, D, Regime.SHORT_DRUDE, constants)
    omega_star = params.omega_p if omega_star is None else omega_star
    k = (constants.hbar * params.omega_c ** 2 * params.omega_p
         / (16.0 * math.pi * math.sqrt(2.0) * constants.c ** 2))
    return AsymptoticResult(-k * _log_factor(D, omega_star, log_offset, constants), -k / D,
                            Regime.SHORT_DRUDE.value, cutoff_used=omega_star)


def realistic_long(dc_A: DcTransportParams, dc_B: DcTransportParams, D: float,
                   constants: PhysicalConstants = GAUSSIAN) -> AsymptoticResult:
    """Large distance from dc conductivities and anomalous Hall angles."""
    _check_distance(D)
    delta_e = (-3.0 * ZETA3 / (64.0 * math.pi ** 3) * constants.hbar * constants.c ** 2 / D ** 4
               * dc_A.theta * dc_B.theta / math.sqrt(dc_A.sigma * dc_B.sigma))
    return AsymptoticResult(delta_e, 4.0 * delta_e / D, Regime.LONG_REALISTIC.value)


def _reference_frequency(model: MaterialModel) -> Optional[float]:
    p = model.params
    if isinstance(p, DrudeParams):
        return p.omega_p
    if isinstance(p, OscillatorParams):
        return p.omega_0
    if isinstance(p, TabulatedSpectrum):
        return float(p.grid[-1])
    if isinstance(p, DcTransportParams):
        raise RegimeError("dc-transport materials have no short-distance limit "
                          "(their magneto-optical response does not decay)")
    return None


def short_distance_weight(model_A: MaterialModel, model_B: MaterialModel) -> float:
    """int_0^inf omega^2 eps_xy^A eps_xy^B / ((1 + eps_xx^A)(1 + eps_xx^B)) d omega."""
    refs = [_reference_frequency(m) for m in (model_A, model_B)]
    if any(isinstance(m.params, (Vacuum, PerfectMirror)) for m in (model_A, model_B)):
        return 0.0
    scale = math.sqrt(refs[0] * refs[1])

    def integrand(v):
        w = scale * v
        return (w ** 2 * eps_xy(model_A, w) * eps_xy(model_B, w)
                / ((1.0 + eps_xx(model_A, w)) * (1.0 + eps_xx(model_B, w))))

    # integrand must fall faster than 1/omega
    tail = [v * abs(integrand(v)) for v in (1e3, 1e4)]
    if tail[0] > 0 and tail[1] > 0.5 * tail[0]:
        raise RegimeError("short-distance frequency integral diverges; check the material tails")

    value, error, info = quad(integrand, 0.0, np.inf, epsabs=0.0, epsrel=1e-10,
                              limit=400, full_output=1)[:3]
    if not math.isfinite(value):
        raise RegimeError("short-distance frequency integral is not finite")
    if error > 1e-6 * abs(value) and value != 0.0:
        logger.warning(f"short-distance frequency integral: error {error:.3g} on {value:.6g}")
    return scale * value


def realistic_short(model_A: MaterialModel, model_B: MaterialModel, D: float,
                    omega_star: Optional[float] = None, log_offset: float = 0.0,
                    constants: PhysicalConstants = GAUSSIAN) -> AsymptoticResult:
    """Short distance for arbitrary materials through one frequency integral I:

        dE = -(hbar/(4 pi^2 c^2)) I [ln(c/(omega_star D)) + log_offset],  dF = -hbar I/(4 pi^2 c^2 D)
    """
    _check_distance(D)
    weight = short_distance_weight(model_A, model_B)
    if omega_star is None:
        refs = [_reference_frequency(m) for m in (model_A, model_B)]
        refs = [r for r in refs if r]
        omega_star = math.sqrt(refs[0] * refs[-1]) if refs else constants.c / D
    k = constants.hbar * weight / (4.0 * math.pi ** 2 * constants.c ** 2)
    return AsymptoticResult(-k * _log_factor(D, omega_star, log_offset, constants), -k / D,
                            Regime.SHORT_REALISTIC.value, cutoff_used=omega_star)


def oscillator_short(osc_A: OscillatorParams, osc_B: OscillatorParams, D: float,
                     omega_star: Optional[float] = None, log_offset: float = 0.0,
                     constants: PhysicalConstants = GAUSSIAN) -> AsymptoticResult:
    """Single-line materials at D <= c/omega_0:

        dF = -(1/16 pi^3)(hbar/c^2 D) omega_0^3 (eps_xy^eff)^2 / (1 + eps_xx^eff/pi)^(3/2)

    Unequal mirrors use eps_xy^A eps_xy^B and geometric means of omega_0^3
    and of the (1 + eps_xx^eff/pi)^(3/2) factors.
    """
    _check_distance(D)
    if osc_A != osc_B:
        logger.info("oscillator_short: unequal mirrors, using the geometric-mean combination")
    omega_0 = math.sqrt(osc_A.omega_0 * osc_B.omega_0)
    if D > constants.c / omega_0:
        warnings.warn(f"D = {D:.4g} exceeds c/omega_0 = {constants.c / omega_0:.4g}; "
                      f"short-distance oscillator limit out of window", ValidityWarning, stacklevel=2)
    damping = math.sqrt(((1.0 + osc_A.eps_xx_eff / math.pi) * (1.0 + osc_B.eps_xx_eff / math.pi)) ** 1.5)
    k = (constants.hbar * omega_0 ** 3 * osc_A.eps_xy_eff * osc_B.eps_xy_eff
         / (16.0 * math.pi ** 3 * constants.c ** 2 * damping))
    omega_star = omega_0 if omega_star is None else omega_star
    return AsymptoticResult(-k * _log_factor(D, omega_star, log_offset, constants), -k / D,
                            Regime.OSCILLATOR_SHORT.value, cutoff_used=omega_star)


def _dc_equivalent(params: DrudeParams) -> DcTransportParams:
    return DcTransportParams(sigma=params.omega_p ** 2 * params.tau / (4.0 * math.pi),
                             theta=params.omega_c * params.tau)


def asymptotic_for_pair(pair, D: float, omega_star: Optional[float] = None,
                        log_offset: float = 0.0,
                        constants: PhysicalConstants = GAUSSIAN) -> AsymptoticResult:
    """Applicable closed form for a MirrorPair in its antiparallel orientation."""
    model_A, model_B = pair.material_A, pair.material_B
    pA, pB = model_A.params, model_B.params
    sign = model_A.magnetization_sign * model_B.magnetization_sign

    if isinstance(pA, DrudeParams) and isinstance(pB, DrudeParams):
        if pA == pB:
            regime = classify(pA, D, constants).regime
            if regime is Regime.LONG_DRUDE:
                result = drude_long(pA, D, constants)
            elif regime is Regime.INTERMEDIATE_DRUDE:
                result = drude_intermediate(pA, D, constants)
            else:
                result = drude_short(pA, D, omega_star, log_offset, constants)
        else:
            long_a = D >= constants.c * pA.tau and D >= constants.c * pB.tau
            short = D <= constants.c / pA.omega_p and D <= constants.c / pB.omega_p
            if long_a:
                result = realistic_long(_dc_equivalent(pA), _dc_equivalent(pB), D, constants)
            elif short:
                return realistic_short(model_A, model_B, D, omega_star, log_offset, constants)
            else:
                raise RegimeError("no closed form for unequal Drude mirrors at this distance")
    elif isinstance(pA, DcTransportParams) and isinstance(pB, DcTransportParams):
        result = realistic_long(pA, pB, D, constants)
    elif isinstance(pA, OscillatorParams) and isinstance(pB, OscillatorParams):
        result = oscillator_short(pA, pB, D, omega_star, log_offset, constants)
    else:
        # signs already inside eps_xy
        return realistic_short(model_A, model_B, D, omega_star, log_offset, constants)

    if sign == 1:
        return result
    return AsymptoticResult(-result.delta_e, -result.delta_f, result.formula_id, result.cutoff_used)


def fit_loglog_slope(distances, magnitudes) -> float:
    """Least-squares slope of ln|y| against ln D."""
    d = np.asarray(distances, dtype=float)
    y = np.abs(np.asarray(magnitudes, dtype=float))
    if d.size < 2:
        raise InputError("slope fit needs at least two points")
    return float(np.polyfit(np.log(d), np.log(y), 1)[0])
