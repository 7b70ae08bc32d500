"""Subcommand implementations. Each returns the process exit status."""
from __future__ import annotations

import logging
import math
import warnings
from functools import partial

import numpy as np

from .asymptotics import asymptotic_for_pair, fit_loglog_slope
from .casimir import (Alignment, EnergyResult, MirrorPair, delta_energy_exact, delta_energy_perturbative,
                      delta_force, energy_exact, force_exact, max_reflection_sp)
from .errors import ConfigError, QuadratureError, RegimeError, ValidityWarning
from .experiment import SpherePlateGeometry, detectability_report, pfa_force
from .materials import eps_xx, eps_xy
from .tools.config import RunConfig
from .tools.output import Column, write_table
from .tools.sweep import run_sweep
from .units import SI_UNIT_LABELS, Dimension, si_from_gaussian

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NOT_CONVERGED = 3
EXIT_IO = 4

_VALIDATION_GRID = np.geomspace(1e8, 1e19, 221)


def _si(value, dimension):
    return si_from_gaussian(value, dimension)


def _column(name: str, dimension: Dimension) -> Column:
    return Column(name, SI_UNIT_LABELS[dimension])


def _finish(config: RunConfig, command: str, columns, rows, metadata, converged: bool) -> int:
    meta = {"command": command, "units": "SI", "source": config.source, **metadata}
    write_table(columns, rows, meta, config.output.format, config.output.path, config.resolved())
    if not converged:
        logger.warning(f"{command}: quadrature did not converge for every distance")
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def _guarded(fn, pair, D, cfg, *args) -> EnergyResult:
    """fn(pair, D, cfg, ...), or a NaN row entry flagged unconverged when its integrand fails."""
    try:
        return fn(pair, D, cfg, *args)
    except QuadratureError as exc:
        logger.warning(f"{fn.__name__} at D={D:.4g} cm: {exc}")
        return EnergyResult(math.nan, math.nan, 0, False)


def _plate_row(results, dimension: Dimension, D: float) -> list:
    return ([_si(D, Dimension.LENGTH)] + [_si(r.value, dimension) for r in results]
            + [_si(r.error_estimate, dimension) for r in results]
            + [sum(r.evaluations for r in results), all(r.converged for r in results)])


def _plate_columns(names, dimension: Dimension) -> list:
    return ([_column("D", Dimension.LENGTH)]
            + [_column(n, dimension) for n in names]
            + [_column(f"err_{n}", dimension) for n in names]
            + [Column("evaluations"), Column("converged")])


def _energy_row(pair, cfg, D):
    results = (_guarded(energy_exact, pair.with_alignment(Alignment.FM), D, cfg),
               _guarded(energy_exact, pair.with_alignment(Alignment.AF), D, cfg),
               _guarded(delta_energy_exact, pair, D, cfg),
               _guarded(delta_energy_perturbative, pair, D, cfg))
    return _plate_row(results, Dimension.ENERGY_PER_AREA, D)


def cmd_energy(config: RunConfig) -> int:
    """Energies of both alignments and the magnetic difference over the distance grid.

    A distance whose integrand leaves its domain keeps its row, with NaN
    in the affected columns and converged=false.
    """
    rows = run_sweep(partial(_energy_row, config.pair, config.quadrature), config.distances(),
                     config.threads)
    columns = _plate_columns(("E_FM", "E_AF", "dE_exact", "dE_perturbative"), Dimension.ENERGY_PER_AREA)
    return _finish(config, "energy", columns, rows, {}, all(r[-1] for r in rows))


def _force_row(pair, cfg, D):
    results = (_guarded(force_exact, pair.with_alignment(Alignment.FM), D, cfg),
               _guarded(force_exact, pair.with_alignment(Alignment.AF), D, cfg),
               _guarded(delta_force, pair, D, cfg, "exact"),
               _guarded(delta_force, pair, D, cfg, "perturbative"))
    return _plate_row(results, Dimension.FORCE_PER_AREA, D)


def cmd_force(config: RunConfig) -> int:
    rows = run_sweep(partial(_force_row, config.pair, config.quadrature), config.distances(),
                     config.threads)
    columns = _plate_columns(("F_FM", "F_AF", "dF_exact", "dF_perturbative"), Dimension.FORCE_PER_AREA)
    return _finish(config, "force", columns, rows, {}, all(r[-1] for r in rows))


def _compare_row(pair, cfg, omega_star, log_offset, D):
    numeric = delta_force(pair, D, cfg)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ValidityWarning)
            limit = asymptotic_for_pair(pair, D, omega_star, log_offset)
        tag, asymptotic = limit.formula_id, limit.delta_f
    except RegimeError as exc:
        logger.info(f"no closed form at D={D:.4g}: {exc}")
        tag, asymptotic = "none", math.nan
    deviation = (numeric.value - asymptotic) / asymptotic if asymptotic else math.nan
    return (D, numeric.value, asymptotic, tag, deviation, numeric.converged)


def cmd_compare(config: RunConfig) -> int:
    """Numeric magnetic force against the applicable closed form, with per-regime slopes."""
    est = config.estimate
    raw = run_sweep(partial(_compare_row, config.pair, config.quadrature, est.omega_star, est.log_offset),
                    config.distances(), config.threads)
    summary = {}
    for tag in sorted({r[3] for r in raw}):
        members = [r for r in raw if r[3] == tag]
        entry = {"points": len(members)}
        deviations = [abs(r[4]) for r in members if not math.isnan(r[4])]
        if deviations:
            entry["max_deviation"] = max(deviations)
        if len(members) >= 2 and all(r[1] != 0 for r in members):
            entry["slope_numeric"] = fit_loglog_slope([r[0] for r in members], [r[1] for r in members])
        summary[tag] = entry

    P = Dimension.FORCE_PER_AREA
    rows = [(_si(D, Dimension.LENGTH), _si(num, P), _si(asym, P), tag, dev, ok)
            for D, num, asym, tag, dev, ok in raw]
    columns = [_column("D", Dimension.LENGTH), _column("dF_numeric", P), _column("dF_asymptotic", P),
               Column("regime"), Column("relative_deviation"), Column("converged")]
    metadata = {f"summary.{tag}": entry for tag, entry in summary.items()}
    return _finish(config, "compare", columns, rows, metadata, all(r[-1] for r in raw))


def cmd_detect(config: RunConfig) -> int:
    """Sphere-plate detectability table plus the headline numbers at the configured distance."""
    geom = config.geometry
    if not isinstance(geom, SpherePlateGeometry):
        raise ConfigError("detect needs a sphere-plate geometry")
    if config.cantilever is None:
        raise ConfigError("detect needs a cantilever section")
    est = config.estimate
    report = detectability_report(config.pair, geom, config.cantilever, config.distances(),
                                  config.quadrature, est.energy_source, est.omega_star,
                                  est.log_offset, est.parasitic_force, config.threads)

    N = Dimension.FORCE
    rows = [(_si(r.distance, Dimension.LENGTH), _si(r.delta_force_sphere, N), _si(r.force_sphere, N),
             _si(r.deflection_limit, N), _si(r.thermal_limit, N), r.snr, r.detectable, r.converged)
            for r in report.rows]
    columns = [_column("D", Dimension.LENGTH), _column("dF_sphere", N), _column("F_sphere", N),
               _column("deflection_limit", N), _column("thermal_limit", N), Column("SNR"),
               Column("detectable"), Column("converged")]

    h = report.headline
    headline = {
        "D_m": _si(h.distance, Dimension.LENGTH),
        "dF_sphere_N": _si(h.delta_force_sphere, N),
        "F_sphere_N": _si(h.force_sphere, N),
        "deflection_limit_N": _si(h.deflection_limit, N),
        "thermal_limit_N": _si(h.thermal_limit, N),
        "SNR": h.snr,
        "bandwidth_Hz": report.bandwidth_dnu,
        "energy_source": report.energy_source,
        "parasitic_force_N": _si(report.parasitic_force, N),
    }
    if report.energy_source != "quadrature":
        numeric = delta_energy_perturbative(config.pair, geom.distance_D, config.quadrature)
        headline["dF_sphere_quadrature_N"] = _si(pfa_force(lambda _: numeric.value, geom), N)
    converged = h.converged and all(r.converged for r in report.rows)
    return _finish(config, "detect", columns, rows, {"headline": headline}, converged)


def cmd_materials_validate(config: RunConfig) -> int:
    """Check eps_xx >= 1, monotone decrease and finite eps_xy for every material."""
    status = EXIT_OK
    for name, model in config.materials.items():
        if model.is_perfect:
            print(f"{name}: ok ({model.variant}, reference mirror)")
            continue
        xx = eps_xx(model, _VALIDATION_GRID)
        xy = eps_xy(model, _VALIDATION_GRID)
        problems = []
        if not np.all(xx >= 1.0):
            problems.append("eps_xx < 1")
        if np.any(np.diff(xx) > 0):
            problems.append("eps_xx increases with frequency")
        if not np.all(np.isfinite(xy)):
            problems.append("eps_xy not finite")
        if problems:
            status = EXIT_CONFIG
            print(f"{name}: INVALID ({model.variant}): {'; '.join(problems)}")
        else:
            D = config.geometry.distance_D
            largest = max_reflection_sp(MirrorPair(model, model), D, config.quadrature)
            print(f"{name}: ok ({model.variant}, max |r_sp| at D = {D:.4g} cm is {largest:.3g})")
    return status
