"""Run configuration: one JSON file, physical values converted to Gaussian-cgs on load."""
from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Optional, Union

import numpy as np

from ..casimir import MirrorPair
from ..errors import ConfigError
from ..experiment import ENERGY_SOURCES, CantileverSpec, SpherePlateGeometry
from ..materials import (DcTransportParams, DrudeParams, MaterialModel, OscillatorParams,
                         PerfectMirror, TabulatedSpectrum, Vacuum, from_preset, load_spectrum)
from ..units import parse_quantity
from .quadrature import QuadratureConfig

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("csv", "json")


@dataclass(frozen=True)
class PlateGeometry:
    distance_D: float


@dataclass(frozen=True)
class SweepSpec:
    D_start: float
    D_stop: float
    points: int

    def __post_init__(self):
        if not 0 < self.D_start < self.D_stop:
            raise ConfigError(f"sweep needs 0 < start < stop, got {self.D_start} .. {self.D_stop}")
        if self.points < 2:
            raise ConfigError(f"sweep needs at least 2 points, got {self.points}")

    def grid(self) -> list[float]:
        return [float(d) for d in np.geomspace(self.D_start, self.D_stop, self.points)]


@dataclass(frozen=True)
class EstimateSpec:
    energy_source: str = "quadrature"
    omega_star: Optional[float] = None
    log_offset: float = 0.0
    parasitic_force: float = 0.0


@dataclass(frozen=True)
class OutputSpec:
    format: str = "csv"
    path: Optional[str] = None


@dataclass(frozen=True)
class RunConfig:
    materials: dict
    pair: MirrorPair
    geometry: Union[PlateGeometry, SpherePlateGeometry]
    sweep: Optional[SweepSpec]
    quadrature: QuadratureConfig
    cantilever: Optional[CantileverSpec]
    estimate: EstimateSpec
    output: OutputSpec
    units_in: str
    threads: int = 1
    source: Optional[str] = None
    raw: Optional[dict] = None

    def distances(self) -> list[float]:
        if self.sweep is not None:
            return self.sweep.grid()
        return [self.geometry.distance_D]

    def resolved(self) -> dict:
        """Gaussian-cgs view of the configuration for output provenance."""
        return {
            "source": self.source,
            "units_in": self.units_in,
            "materials": {name: _describe_material(m) for name, m in self.materials.items()},
            "pair": {"a": self.pair.material_A.name, "b": self.pair.material_B.name},
            "geometry": {"type": type(self.geometry).__name__, **asdict(self.geometry)},
            "sweep": asdict(self.sweep) if self.sweep else None,
            "quadrature": asdict(self.quadrature),
            "cantilever": asdict(self.cantilever) if self.cantilever else None,
            "estimate": asdict(self.estimate),
            "input": self.raw,
        }

    def with_overrides(self, rel_tol=None, output_path=None, output_format=None, threads=None) -> "RunConfig":
        cfg = self
        if rel_tol is not None:
            try:
                cfg = replace(cfg, quadrature=replace(cfg.quadrature, rel_tol=rel_tol))
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        if output_path is not None or output_format is not None:
            fmt = output_format or cfg.output.format
            if fmt not in OUTPUT_FORMATS:
                raise ConfigError(f"output format must be one of {OUTPUT_FORMATS}, got '{fmt}'")
            cfg = replace(cfg, output=OutputSpec(fmt, output_path or cfg.output.path))
        if threads is not None:
            cfg = replace(cfg, threads=threads)
        return cfg


def _describe_material(model: MaterialModel) -> dict:
    params = model.params
    if isinstance(params, TabulatedSpectrum):
        body = {"points": int(params.grid.size), "omega_min": float(params.grid[0]),
                "omega_max": float(params.grid[-1]), "tail": params.tail}
    else:
        body = asdict(params)
    return {"variant": model.variant, "magnetization_sign": model.magnetization_sign, **body}


def _section(data: dict, key: str, required: bool = True) -> Optional[dict]:
    value = data.get(key)
    if value is None:
        if required:
            raise ConfigError(f"missing section '{key}'")
        return None
    if not isinstance(value, dict):
        raise ConfigError(f"section '{key}' must be an object")
    return value


def _get(section: dict, key: str, where: str):
    if key not in section:
        raise ConfigError(f"{where}: missing '{key}'")
    return section[key]


def _material(name: str, spec: dict, units_in: str, base_dir: Path) -> MaterialModel:
    where = f"materials.{name}"
    if not isinstance(spec, dict):
        raise ConfigError(f"{where} must be an object")
    kind = _get(spec, "model", where)
    sign = spec.get("magnetization_sign", 1)

    def q(key, kind_of_value):
        return parse_quantity(_get(spec, key, where), kind_of_value, units_in)

    if kind == "drude":
        params = DrudeParams(omega_p=q("omega_p", "frequency"), omega_c=q("omega_c", "frequency"),
                             tau=q("tau", "time"))
    elif kind == "drude-microscopic":
        params = DrudeParams.from_microscopic(density=q("density", "density"),
                                              effective_mass=q("effective_mass", "mass"),
                                              b_eff=q("b_eff", "field"), tau=q("tau", "time"))
    elif kind == "dc":
        tau_equiv = spec.get("tau_equiv")
        params = DcTransportParams(sigma=q("sigma", "conductivity"), theta=q("theta", "dimensionless"),
                                   tau_equiv=None if tau_equiv is None
                                   else parse_quantity(tau_equiv, "time", units_in))
    elif kind == "oscillator":
        params = OscillatorParams(omega_0=q("omega_0", "frequency"),
                                  eps_xx_eff=q("eps_xx_eff", "dimensionless"),
                                  eps_xy_eff=q("eps_xy_eff", "dimensionless"))
    elif kind == "tabulated":
        path = Path(_get(spec, "path", where))
        if not path.is_absolute():
            path = base_dir / path
        params = load_spectrum(path, tail=spec.get("tail", "zero"))
    elif kind == "preset":
        return MaterialModel(from_preset(_get(spec, "name", where)).params, sign, name)
    elif kind == "perfect":
        params = PerfectMirror()
    elif kind == "vacuum":
        params = Vacuum()
    else:
        raise ConfigError(f"{where}: unknown model '{kind}'")
    return MaterialModel(params, magnetization_sign=sign, name=name)


def _geometry(section: dict, units_in: str):
    kind = section.get("type", "plate-plate")
    distance = parse_quantity(_get(section, "distance", "geometry"), "length", units_in)
    if kind == "plate-plate":
        if "radius" in section:
            raise ConfigError("geometry: plate-plate takes no radius")
        return PlateGeometry(distance)
    if kind == "sphere-plate":
        radius = parse_quantity(_get(section, "radius", "geometry"), "length", units_in)
        return SpherePlateGeometry(radius, distance)
    raise ConfigError(f"geometry: unknown type '{kind}'")


def parse_config(data: dict, base_dir: Path = Path("."), source: Optional[str] = None) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object")
    units_in = data.get("units", "si")
    if units_in not in ("si", "gaussian"):
        raise ConfigError(f"units must be 'si' or 'gaussian', got '{units_in}'")

    materials_section = _section(data, "materials")
    if not materials_section:
        raise ConfigError("no materials defined")
    materials = {name: _material(name, spec, units_in, base_dir)
                 for name, spec in materials_section.items()}

    pair_section = _section(data, "pair")
    names = (_get(pair_section, "a", "pair"), _get(pair_section, "b", "pair"))
    for name in names:
        if name not in materials:
            raise ConfigError(f"pair: material '{name}' is not defined")
    pair = MirrorPair(materials[names[0]], materials[names[1]])

    geometry = _geometry(_section(data, "geometry"), units_in)

    sweep = None
    sweep_section = _section(data, "sweep", required=False)
    if sweep_section is not None:
        sweep = SweepSpec(parse_quantity(_get(sweep_section, "start", "sweep"), "length", units_in),
                          parse_quantity(_get(sweep_section, "stop", "sweep"), "length", units_in),
                          int(_get(sweep_section, "points", "sweep")))

    quad_section = _section(data, "quadrature", required=False) or {}
    allowed = set(QuadratureConfig.__dataclass_fields__)
    unknown = set(quad_section) - allowed
    if unknown:
        raise ConfigError(f"quadrature: unknown keys {sorted(unknown)}")
    quadrature = QuadratureConfig(**quad_section)

    cantilever = None
    cant = _section(data, "cantilever", required=False)
    if cant is not None:
        cantilever = CantileverSpec(
            spring_k=parse_quantity(_get(cant, "spring_k", "cantilever"), "stiffness", units_in),
            quality_Q=parse_quantity(_get(cant, "quality_Q", "cantilever"), "dimensionless", units_in),
            resonance_hz=parse_quantity(_get(cant, "resonance", "cantilever"), "ordinary_frequency", units_in),
            deflection_dx=parse_quantity(cant.get("deflection", 0.0), "length", units_in),
            temperature_T=parse_quantity(_get(cant, "temperature", "cantilever"), "temperature", units_in),
            bandwidth_dnu=parse_quantity(cant.get("bandwidth", 1.0), "ordinary_frequency", units_in))

    est = _section(data, "estimate", required=False) or {}
    source_kind = est.get("energy_source", "quadrature")
    if source_kind not in ENERGY_SOURCES:
        raise ConfigError(f"estimate: energy_source must be one of {ENERGY_SOURCES}")
    omega_star = est.get("omega_star")
    estimate = EstimateSpec(
        energy_source=source_kind,
        omega_star=None if omega_star is None else parse_quantity(omega_star, "frequency", units_in),
        log_offset=float(est.get("log_offset", 0.0)),
        parasitic_force=parse_quantity(est.get("parasitic_force", 0.0), "force", units_in))

    out = _section(data, "output", required=False) or {}
    output = OutputSpec(out.get("format", "csv"), out.get("path"))
    if output.format not in OUTPUT_FORMATS:
        raise ConfigError(f"output format must be one of {OUTPUT_FORMATS}, got '{output.format}'")

    return RunConfig(materials, pair, geometry, sweep, quadrature, cantilever, estimate, output,
                     units_in, int(data.get("threads", 1)), source, data)


def load_config(path) -> RunConfig:
    """Read and validate a JSON run configuration; relative spectrum paths resolve next to it."""
    path = Path(path)
    with path.open("r", encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    try:
        config = parse_config(data, base_dir=path.parent, source=str(path))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{path}: {exc}") from exc
    logger.info(f"Loaded configuration {path} with {len(config.materials)} material(s)")
    return config
