"""Reflection matrix of a magnetized mirror at imaginary frequency and normal wavevector."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InputError, MaterialError, RegimeError
from .materials import DrudeParams, MaterialModel, eps_xx, eps_xy
from .units import GAUSSIAN, PhysicalConstants


@dataclass(frozen=True)
class ReflectionMatrix:
    r_ss: float
    r_pp: float
    r_sp: float

    @property
    def r_ps(self) -> float:
        # s axis unchanged upon reflection
        return self.r_sp

    def as_array(self) -> np.ndarray:
        return np.array([[self.r_ss, self.r_sp], [self.r_ps, self.r_pp]])


@dataclass(frozen=True)
class KPoint:
    """A point (omega, k_perp) of the rotated integration contour, omega <= k_perp c."""
    omega: float
    k_perp: float
    constants: PhysicalConstants = GAUSSIAN

    def __post_init__(self):
        if not self.omega > 0:
            raise InputError(f"omega must be positive, got {self.omega}")
        if not self.k_perp > 0:
            raise InputError(f"k_perp must be positive, got {self.k_perp}")
        if self.omega > self.kc * (1.0 + 1e-12):
            raise InputError(f"omega = {self.omega} exceeds k_perp c = {self.kc}")

    @property
    def kc(self) -> float:
        return self.k_perp * self.constants.c


class FresnelTerms(NamedTuple):
    r_ss: np.ndarray
    r_pp: np.ndarray
    r_sp: np.ndarray
    one_plus_rss: np.ndarray
    one_minus_rpp: np.ndarray


def fresnel_terms(model: MaterialModel, omega, kc) -> FresnelTerms:
    """Vectorized coefficients plus the complements 1 + r_ss and 1 - r_pp.

    r_ss is written as -omega^2 (eps-1)/(kc+s)^2 and r_pp with the
    numerator (eps-1)(kc - omega^2/(kc+s)); both are exact rewrites that
    stay accurate when s is close to kc.
    """
    omega = np.asarray(omega, dtype=float)
    kc = np.asarray(kc, dtype=float)
    if model.is_perfect:
        zero = np.zeros(np.broadcast(omega, kc).shape)
        return FresnelTerms(zero - 1.0, zero + 1.0, zero, zero, zero.copy())

    exx = eps_xx(model, omega)
    exy = eps_xy(model, omega)
    chi = exx - 1.0
    radicand = omega ** 2 * chi + kc ** 2
    if not np.all(radicand > 0):
        raise MaterialError("non-positive radicand in s; eps_xx < 1 is not a passive response")
    s = np.sqrt(radicand)
    ksum = kc + s
    pden = exx * kc + s
    r_ss = -(omega ** 2) * chi / ksum ** 2
    r_pp = chi * (kc - omega ** 2 / ksum) / pden
    r_sp = -kc * omega * exy / (ksum * pden)
    return FresnelTerms(r_ss, r_pp, r_sp, 2.0 * kc / ksum, 2.0 * s / pden)


def reflection_matrix(model: MaterialModel, p: KPoint) -> ReflectionMatrix:
    terms = fresnel_terms(model, p.omega, p.kc)
    return ReflectionMatrix(float(terms.r_ss), float(terms.r_pp), float(terms.r_sp))


def reflection_limit_check(model: MaterialModel, regime: str, p: KPoint,
                           margin: float = 10.0) -> ReflectionMatrix:
    """Limiting Drude reflection matrix for a point inside the named regime's window.

    Windows, each inequality held by `margin`:
      long          omega tau <= 1 and omega omega_p^2 tau >= (k_perp c)^2
      intermediate  omega tau >= 1 and k_perp c <= omega_p
      short         k_perp c >= omega_p, omega tau >= 1 and omega <= k_perp c
    """
    params = model.params
    if not isinstance(params, DrudeParams):
        raise RegimeError(f"limiting forms exist for Drude mirrors only, got {model.variant}")
    w, kc, m = p.omega, p.kc, margin
    wp, wc, tau = params.omega_p, params.omega_c, params.tau
    sign = model.magnetization_sign

    if regime == "long":
        inside = w * tau * m <= 1.0 and w * wp ** 2 * tau >= (m * kc) ** 2
        limit = ReflectionMatrix(-1.0, 1.0, -sign * (wc / wp) * math.sqrt(w * tau))
    elif regime == "intermediate":
        inside = w * tau >= m and kc * m <= wp
        limit = ReflectionMatrix(-1.0, 1.0, -sign * wc / wp)
    elif regime == "short":
        inside = kc >= m * wp and w * tau >= m and w * m <= kc
        dpp = 2.0 * w ** 2 + wp ** 2
        limit = ReflectionMatrix(-wp ** 2 / (4.0 * kc ** 2), wp ** 2 / dpp,
                                 -sign * wp ** 2 * wc / (2.0 * kc * dpp))
    else:
        raise RegimeError(f"unknown regime '{regime}'")

    if not inside:
        raise RegimeError(f"point omega={w:.4g}, k_perp c={kc:.4g} is outside the {regime} window")
    return limit
