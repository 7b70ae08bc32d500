"""Sphere-plate measurement estimate: proximity force, cantilever noise floors, detectability."""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from functools import partial
from typing import Callable, Optional, Sequence

from .asymptotics import asymptotic_for_pair
from .casimir import Alignment, MirrorPair, delta_energy_perturbative, energy_exact
from .errors import InputError, ValidityWarning
from .tools.quadrature import QuadratureConfig
from .tools.sweep import run_sweep
from .units import GAUSSIAN, PhysicalConstants

logger = logging.getLogger(__name__)

PFA_RATIO_LIMIT = 1e-2
ENERGY_SOURCES = ("quadrature", "short-distance")


@dataclass(frozen=True)
class SpherePlateGeometry:
    radius_R: float
    distance_D: float

    def __post_init__(self):
        if not (self.radius_R > 0 and self.distance_D > 0):
            raise InputError(f"radius and distance must be positive, got R={self.radius_R}, D={self.distance_D}")
        if self.distance_D / self.radius_R > PFA_RATIO_LIMIT:
            warnings.warn(f"D/R = {self.distance_D / self.radius_R:.3g} > {PFA_RATIO_LIMIT:g}; "
                          f"proximity force approximation is poor", ValidityWarning, stacklevel=3)


@dataclass(frozen=True)
class CantileverSpec:
    """Gaussian units: k in dyn/cm, dx in cm, T in K. Resonance in Hz (ordinary frequency)."""
    spring_k: float
    quality_Q: float
    resonance_hz: float
    deflection_dx: float
    temperature_T: float
    bandwidth_dnu: float = 1.0

    def __post_init__(self):
        if not (self.spring_k > 0 and self.resonance_hz > 0 and self.bandwidth_dnu > 0):
            raise InputError("spring constant, resonance and bandwidth must be positive")
        if self.quality_Q < 1:
            raise InputError(f"quality factor must be at least 1, got {self.quality_Q}")
        if self.deflection_dx < 0 or self.temperature_T < 0:
            raise InputError("deflection and temperature must be non-negative")

    @property
    def omega_r(self) -> float:
        return 2.0 * math.pi * self.resonance_hz


def pfa_force(delta_e_of_D: Callable[[float], float], geom: SpherePlateGeometry) -> float:
    """Sphere-plate force 2 pi R E(D) from a plate-plate energy per area."""
    return 2.0 * math.pi * geom.radius_R * delta_e_of_D(geom.distance_D)


def min_force_deflection(spec: CantileverSpec) -> float:
    return spec.spring_k * spec.deflection_dx / spec.quality_Q


def min_force_thermal(spec: CantileverSpec, constants: PhysicalConstants = GAUSSIAN) -> float:
    """Thermomechanical floor sqrt(4 k_B T dnu k / (omega_r Q))."""
    return math.sqrt(4.0 * constants.k_B * spec.temperature_T * spec.bandwidth_dnu
                     * spec.spring_k / (spec.omega_r * spec.quality_Q))


@dataclass(frozen=True)
class DetectabilityRow:
    distance: float
    delta_force_sphere: float
    force_sphere: float
    deflection_limit: float
    thermal_limit: float
    snr: float
    detectable: bool
    converged: bool


@dataclass(frozen=True)
class DetectabilityReport:
    rows: list
    headline: DetectabilityRow
    bandwidth_dnu: float
    energy_source: str
    parasitic_force: float = 0.0


@dataclass(frozen=True)
class _ReportContext:
    pair: MirrorPair
    radius_R: float
    spec: CantileverSpec
    cfg: QuadratureConfig
    energy_source: str
    omega_star: Optional[float]
    log_offset: float
    parasitic_force: float
    constants: PhysicalConstants


def _report_row(ctx: _ReportContext, D: float) -> DetectabilityRow:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ValidityWarning)
        geom = SpherePlateGeometry(ctx.radius_R, D)
    converged = True
    if ctx.energy_source == "quadrature":
        magnetic = delta_energy_perturbative(ctx.pair, D, ctx.cfg, ctx.constants)
        delta_e, converged = magnetic.value, magnetic.converged
    else:
        delta_e = asymptotic_for_pair(ctx.pair, D, ctx.omega_star, ctx.log_offset, ctx.constants).delta_e
    total = energy_exact(ctx.pair.with_alignment(Alignment.FM), D, ctx.cfg, ctx.constants)

    delta_force = pfa_force(lambda _: delta_e, geom)
    force = pfa_force(lambda _: total.value, geom)
    deflection = min_force_deflection(ctx.spec)
    thermal = min_force_thermal(ctx.spec, ctx.constants)
    floor = max(deflection, thermal)
    if delta_force == 0.0:
        snr = 0.0
    else:
        snr = abs(delta_force) / floor if floor > 0 else math.inf
    detectable = snr > 1.0 and abs(delta_force) > ctx.parasitic_force
    return DetectabilityRow(D, delta_force, force, deflection, thermal, snr, detectable,
                            converged and total.converged)


def detectability_report(pair: MirrorPair, geom: SpherePlateGeometry, spec: CantileverSpec,
                         D_grid: Sequence[float], cfg: QuadratureConfig = None,
                         energy_source: str = "quadrature", omega_star: Optional[float] = None,
                         log_offset: float = 0.0, parasitic_force: float = 0.0,
                         threads: int = 1,
                         constants: PhysicalConstants = GAUSSIAN) -> DetectabilityReport:
    """Per-distance signal, Casimir background and noise floors; SNR > 1 is detectable."""
    if energy_source not in ENERGY_SOURCES:
        raise InputError(f"energy_source must be one of {ENERGY_SOURCES}, got '{energy_source}'")
    if parasitic_force < 0:
        raise InputError(f"parasitic force bound must be non-negative, got {parasitic_force}")
    ctx = _ReportContext(pair, geom.radius_R, spec, cfg or QuadratureConfig(), energy_source,
                         omega_star, log_offset, parasitic_force, constants)
    rows = run_sweep(partial(_report_row, ctx), D_grid, threads)
    headline = next((r for r in rows if r.distance == geom.distance_D), None)
    if headline is None:
        headline = _report_row(ctx, geom.distance_D)
    logger.info(f"Headline at D={geom.distance_D:.4g} cm: |dF|={abs(headline.delta_force_sphere):.4g} dyn, "
                f"SNR={headline.snr:.3g}")
    return DetectabilityReport(rows, headline, spec.bandwidth_dnu, energy_source, parasitic_force)
