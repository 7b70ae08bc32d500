"""Zero-temperature Casimir energy and force between two magnetized plane mirrors.

All integrals are taken over u = 2 k_perp D and t = omega/(k_perp c):

    E   =  hbar c / (32 pi^2 D^3) int u^2 du int dt ln det(1 - R_A R_B e^-u)
    F   = -hbar c / (32 pi^2 D^4) int u^3 du int dt T,   T = -x d(ln det)/dx

With a = r_ss^A r_ss^B, b = r_pp^A r_pp^B, q = r_sp^A r_sp^B, x = e^-u:

    det = (1 - a x)(1 - b x) - 2 x q + x^2 (q^2 - e),
    e   = r_ss^A r_pp^A (r_sp^B)^2 + (r_sp^A)^2 r_ss^B r_pp^B.

Alignment: each material's magnetization_sign is taken relative to its
own outward normal, so the pair as given is antiparallel (AF); the
parallel (FM) configuration reverses mirror B.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import InputError, MaterialError, QuadratureError, ValidityWarning
from .materials import DcTransportParams, MaterialModel
from .reflectivity import fresnel_terms
from .tools.quadrature import QuadratureConfig, integrate_plane, t_rule
from .units import GAUSSIAN, PhysicalConstants

logger = logging.getLogger(__name__)

PERTURBATIVE_RSP_LIMIT = 0.3
_DC_VALIDITY_FACTOR = 10.0


class Alignment(Enum):
    FM = "FM"
    AF = "AF"


@dataclass(frozen=True)
class MirrorPair:
    material_A: MaterialModel
    material_B: MaterialModel
    alignment: Alignment = Alignment.AF

    def with_alignment(self, alignment: Alignment) -> "MirrorPair":
        return replace(self, alignment=alignment)

    @property
    def oriented_B(self) -> MaterialModel:
        """Mirror B as it faces A in this pair's alignment."""
        return self.material_B if self.alignment is Alignment.AF else self.material_B.reversed()


@dataclass(frozen=True)
class EnergyResult:
    """Energy per unit area (erg/cm^2) or force per unit area (dyn/cm^2)."""
    value: float
    error_estimate: float
    evaluations: int
    converged: bool


ForceResult = EnergyResult


class _Channels:
    """Reflection products of a pair on one u-slice of the node set."""

    def __init__(self, model_A: MaterialModel, model_B: MaterialModel, u: float,
                 t: np.ndarray, D: float, c: float):
        kc = u * c / (2.0 * D)
        omega = t * kc
        A = fresnel_terms(model_A, omega, kc)
        B = fresnel_terms(model_B, omega, kc)
        self.x = math.exp(-u)
        self.omx = -math.expm1(-u)
        self.a = A.r_ss * B.r_ss
        self.b = A.r_pp * B.r_pp
        self.q = A.r_sp * B.r_sp
        self.e = A.r_ss * A.r_pp * B.r_sp ** 2 + A.r_sp ** 2 * B.r_ss * B.r_pp
        self.sp_squares = A.r_sp ** 2 + B.r_sp ** 2
        one_minus_a = A.one_plus_rss + B.one_plus_rss - A.one_plus_rss * B.one_plus_rss
        one_minus_b = A.one_minus_rpp + B.one_minus_rpp - A.one_minus_rpp * B.one_minus_rpp
        self.one_minus_a = one_minus_a
        self.one_minus_b = one_minus_b
        self.one_minus_ax = self.omx + self.x * one_minus_a
        self.one_minus_bx = self.omx + self.x * one_minus_b

    @property
    def diagonal(self) -> np.ndarray:
        return self.one_minus_ax * self.one_minus_bx

    def determinant(self, q_sign: float = 1.0) -> np.ndarray:
        x = self.x
        det = self.diagonal - 2.0 * x * q_sign * self.q + x * x * (self.q ** 2 - self.e)
        if not np.all(det > 0):
            raise QuadratureError("det(1 - R_A R_B e^-u) left (0, inf)")
        return det

    def trace_numerator(self, q_sign: float = 1.0) -> np.ndarray:
        """-x d(det)/dx."""
        x = self.x
        return (self.a * x * self.one_minus_bx + self.b * x * self.one_minus_ax
                + 2.0 * x * q_sign * self.q - 2.0 * x * x * (self.q ** 2 - self.e))

    def one_minus_abx2(self) -> np.ndarray:
        x = self.x
        one_minus_ab = self.one_minus_a + self.a * self.one_minus_b
        return self.omx * (1.0 + x) + x * x * one_minus_ab


def _check_distance(D: float) -> None:
    if not (D > 0 and math.isfinite(D)):
        raise InputError(f"distance must be positive, got {D}")


def check_material_validity(pair: MirrorPair, D: float, cfg: QuadratureConfig,
                            constants: PhysicalConstants = GAUSSIAN) -> None:
    """dc-transport mirrors hold only for D >= 10 c tau_equiv."""
    for model in (pair.material_A, pair.material_B):
        params = model.params
        if not isinstance(params, DcTransportParams):
            continue
        if params.tau_equiv is None:
            logger.info(f"dc-transport material '{model.name}' has no tau_equiv; frequency validity not checked")
            continue
        d_min = _DC_VALIDITY_FACTOR * constants.c * params.tau_equiv
        if D < d_min:
            message = (f"dc-transport material '{model.name}' is valid for D >= {d_min:.4g} "
                       f"only, got D = {D:.4g}")
            if cfg.strict_material_validity:
                raise MaterialError(message)
            warnings.warn(message, ValidityWarning, stacklevel=3)


def _prepare(pair, D, cfg, constants):
    _check_distance(D)
    cfg = cfg or QuadratureConfig()
    check_material_validity(pair, D, cfg, constants)
    return cfg


def _as_result(outcome) -> EnergyResult:
    return EnergyResult(outcome.value, outcome.error, outcome.evaluations, outcome.converged)


def energy_exact(pair: MirrorPair, D: float, cfg: QuadratureConfig = None,
                 constants: PhysicalConstants = GAUSSIAN) -> EnergyResult:
    """Casimir energy per unit area of the pair in its own alignment."""
    cfg = _prepare(pair, D, cfg, constants)
    model_A, model_B = pair.material_A, pair.oriented_B

    def kernel(u, t):
        return np.log(_Channels(model_A, model_B, u, t, D, constants.c).determinant())

    scale = constants.hbar * constants.c / (32.0 * math.pi ** 2 * D ** 3)
    return _as_result(integrate_plane(kernel, 2, cfg, scale))


def delta_energy_exact(pair: MirrorPair, D: float, cfg: QuadratureConfig = None,
                       constants: PhysicalConstants = GAUSSIAN) -> EnergyResult:
    """E_AF - E_FM, differenced pointwise on one node set.

    det_AF = det_FM - 4 x q, so ln(det_AF/det_FM) = log1p(-4 x q / det_FM).
    """
    cfg = _prepare(pair, D, cfg, constants)
    model_A, model_B = pair.material_A, pair.material_B

    def kernel(u, t):
        ch = _Channels(model_A, model_B, u, t, D, constants.c)
        ratio = -4.0 * ch.x * ch.q / ch.determinant(q_sign=-1.0)
        if not np.all(ratio > -1.0):
            raise QuadratureError(f"antiparallel determinant left (0, inf) at u = {u:.4g}")
        return np.log1p(ratio)

    scale = constants.hbar * constants.c / (32.0 * math.pi ** 2 * D ** 3)
    return _as_result(integrate_plane(kernel, 2, cfg, scale))


def delta_energy_perturbative(pair: MirrorPair, D: float, cfg: QuadratureConfig = None,
                              constants: PhysicalConstants = GAUSSIAN) -> EnergyResult:
    """Lowest order in the magneto-optical coefficients:

        dE = -hbar c/(8 pi^2 D^3) int u^2 du int dt q x / ((1 - a x)(1 - b x))
    """
    cfg = _prepare(pair, D, cfg, constants)
    _warn_large_rsp(pair, D, cfg, constants)
    model_A, model_B = pair.material_A, pair.material_B

    def kernel(u, t):
        ch = _Channels(model_A, model_B, u, t, D, constants.c)
        return ch.q * ch.x / ch.diagonal

    scale = -constants.hbar * constants.c / (8.0 * math.pi ** 2 * D ** 3)
    return _as_result(integrate_plane(kernel, 2, cfg, scale))


def force_exact(pair: MirrorPair, D: float, cfg: QuadratureConfig = None,
                constants: PhysicalConstants = GAUSSIAN) -> ForceResult:
    """-dE/dD, differentiated under the integral sign; negative means attractive."""
    cfg = _prepare(pair, D, cfg, constants)
    model_A, model_B = pair.material_A, pair.oriented_B

    def kernel(u, t):
        ch = _Channels(model_A, model_B, u, t, D, constants.c)
        return ch.trace_numerator() / ch.determinant()

    scale = -constants.hbar * constants.c / (32.0 * math.pi ** 2 * D ** 4)
    return _as_result(integrate_plane(kernel, 3, cfg, scale))


def delta_force(pair: MirrorPair, D: float, cfg: QuadratureConfig = None,
                method: str = "perturbative",
                constants: PhysicalConstants = GAUSSIAN) -> ForceResult:
    """F_AF - F_FM, from the perturbative energy (default) or the exact difference."""
    if method not in ("perturbative", "exact"):
        raise InputError(f"method must be 'perturbative' or 'exact', got '{method}'")
    cfg = _prepare(pair, D, cfg, constants)
    model_A, model_B = pair.material_A, pair.material_B

    if method == "perturbative":
        _warn_large_rsp(pair, D, cfg, constants)

        def kernel(u, t):
            ch = _Channels(model_A, model_B, u, t, D, constants.c)
            return ch.q * ch.x * ch.one_minus_abx2() / ch.diagonal ** 2

        scale = -constants.hbar * constants.c / (8.0 * math.pi ** 2 * D ** 4)
    else:
        def kernel(u, t):
            # T_AF - T_FM = 4 x q (S + P) / (det_AF det_FM), with
            # S + P = (1 - ax)(1 - bx) + ax(1 - bx) + bx(1 - ax) - x^2 (q^2 - e)
            ch = _Channels(model_A, model_B, u, t, D, constants.c)
            x = ch.x
            s_plus_p = (ch.diagonal + ch.a * x * ch.one_minus_bx + ch.b * x * ch.one_minus_ax
                        - x * x * (ch.q ** 2 - ch.e))
            return 4.0 * x * ch.q * s_plus_p / (ch.determinant() * ch.determinant(q_sign=-1.0))

        scale = -constants.hbar * constants.c / (32.0 * math.pi ** 2 * D ** 4)
    return _as_result(integrate_plane(kernel, 3, cfg, scale))


def max_reflection_sp(pair: MirrorPair, D: float, cfg: QuadratureConfig = None,
                      constants: PhysicalConstants = GAUSSIAN, samples: int = 96) -> float:
    """Largest |r_sp| of either mirror over the (u, t) node set."""
    _check_distance(D)
    cfg = cfg or QuadratureConfig()
    nodes, _ = t_rule(cfg.t_order, cfg.t_decades)
    largest = 0.0
    for u in np.geomspace(1e-4, cfg.u_max, samples):
        kc = u * constants.c / (2.0 * D)
        for model in (pair.material_A, pair.material_B):
            r_sp = fresnel_terms(model, nodes * kc, kc).r_sp
            largest = max(largest, float(np.max(np.abs(r_sp))))
    return largest


def expansion_parameter(pair: MirrorPair, D: float, cfg: QuadratureConfig = None,
                        constants: PhysicalConstants = GAUSSIAN, samples: int = 128) -> float:
    """Largest x ((r_sp^A)^2 + (r_sp^B)^2) / ((1 - a x)(1 - b x)) over the node set.

    Bounds the relative gap between the exact and lowest-order magnetic
    energies; it exceeds max |r_sp|^2 wherever the diagonal channels
    reflect almost perfectly.
    """
    _check_distance(D)
    cfg = cfg or QuadratureConfig()
    nodes, _ = t_rule(cfg.t_order, cfg.t_decades)
    largest = 0.0
    for u in np.geomspace(1e-8, cfg.u_max, samples):
        ch = _Channels(pair.material_A, pair.material_B, u, nodes, D, constants.c)
        largest = max(largest, float(np.max(ch.x * ch.sp_squares / ch.diagonal)))
    return largest


def _warn_large_rsp(pair, D, cfg, constants) -> None:
    largest = max_reflection_sp(pair, D, cfg, constants)
    if largest >= PERTURBATIVE_RSP_LIMIT:
        warnings.warn(f"max |r_sp| = {largest:.3g} is not small; the lowest-order expansion "
                      f"is unreliable at D = {D:.4g}", ValidityWarning, stacklevel=3)
