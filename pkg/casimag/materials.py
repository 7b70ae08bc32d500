"""Dielectric tensor of a mirror at imaginary frequency.

Each model gives eps_xx(i omega) and eps_xy(i omega) for omega > 0. The
magneto-optical element carries the mirror's magnetization_sign: +1 means
the magnetization points along the mirror's own outward normal.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Union

import numpy as np

from . import units
from .errors import MaterialError, ValidityWarning

logger = logging.getLogger(__name__)

_MIN_SPECTRUM_POINTS = 8
_SERIES_CUTOFF = 1e-2


@dataclass(frozen=True)
class DrudeParams:
    """Free-electron response with cyclotron frequency from the effective field."""
    omega_p: float
    omega_c: float
    tau: float

    def __post_init__(self):
        if not (self.omega_p > 0 and math.isfinite(self.omega_p)):
            raise MaterialError(f"omega_p must be positive, got {self.omega_p}")
        if not (self.tau > 0 and math.isfinite(self.tau)):
            raise MaterialError(f"tau must be positive, got {self.tau}")
        if not math.isfinite(self.omega_c):
            raise MaterialError(f"omega_c must be finite, got {self.omega_c}")
        if abs(self.omega_c) * self.tau > 0.1 or self.omega_p * self.tau < 10.0:
            warnings.warn(
                f"Drude parameters outside omega_c tau << 1 << omega_p tau "
                f"(omega_c tau = {abs(self.omega_c) * self.tau:.3g}, "
                f"omega_p tau = {self.omega_p * self.tau:.3g})",
                ValidityWarning, stacklevel=3)

    @classmethod
    def from_microscopic(cls, density: float, effective_mass: float, b_eff: float, tau: float,
                         charge: float = units.ELECTRON_CHARGE) -> "DrudeParams":
        """Build from carrier density (cm^-3), mass (g), effective field (G) and tau (s)."""
        if density <= 0 or effective_mass <= 0:
            raise MaterialError("density and effective mass must be positive")
        omega_p = math.sqrt(4.0 * math.pi * density * charge ** 2 / effective_mass)
        omega_c = charge * b_eff / (effective_mass * units.C)
        return cls(omega_p=omega_p, omega_c=omega_c, tau=tau)


@dataclass(frozen=True)
class DcTransportParams:
    """Low-frequency response from the dc conductivity and anomalous Hall angle."""
    sigma: float
    theta: float
    tau_equiv: Union[float, None] = None

    def __post_init__(self):
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise MaterialError(f"sigma must be positive, got {self.sigma}")
        if not abs(self.theta) < 1:
            raise MaterialError(f"|theta| must be below 1, got {self.theta}")
        if self.tau_equiv is not None and not self.tau_equiv > 0:
            raise MaterialError(f"tau_equiv must be positive, got {self.tau_equiv}")
        if abs(self.theta) > 0.1:
            warnings.warn(f"anomalous Hall angle {self.theta} is unusually large",
                          ValidityWarning, stacklevel=3)


@dataclass(frozen=True)
class OscillatorParams:
    """A single absorption line carrying all the spectral weight."""
    omega_0: float
    eps_xx_eff: float
    eps_xy_eff: float

    def __post_init__(self):
        if not (self.omega_0 > 0 and math.isfinite(self.omega_0)):
            raise MaterialError(f"omega_0 must be positive, got {self.omega_0}")
        if not self.eps_xx_eff > 0:
            raise MaterialError(f"eps_xx_eff must be positive, got {self.eps_xx_eff}")
        if not math.isfinite(self.eps_xy_eff):
            raise MaterialError(f"eps_xy_eff must be finite, got {self.eps_xy_eff}")


@dataclass(frozen=True, eq=False)
class TabulatedSpectrum:
    """Measured real-axis spectra, linearly interpolated between samples.

    Outside the grid the spectra are zero, unless tail="power" which
    continues Im eps_xx as a 1/omega^3 law beyond the last sample.
    """
    grid: np.ndarray
    im_eps_xx: np.ndarray
    re_eps_xy: np.ndarray
    tail: str = "zero"

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        im_xx = np.asarray(self.im_eps_xx, dtype=float)
        re_xy = np.asarray(self.re_eps_xy, dtype=float)
        if grid.ndim != 1 or grid.size == 0:
            raise MaterialError("spectrum grid is empty")
        if grid.size < _MIN_SPECTRUM_POINTS:
            raise MaterialError(f"spectrum needs at least {_MIN_SPECTRUM_POINTS} points, got {grid.size}")
        if im_xx.shape != grid.shape or re_xy.shape != grid.shape:
            raise MaterialError("spectrum columns differ in length")
        if not (np.all(np.isfinite(grid)) and np.all(np.isfinite(im_xx)) and np.all(np.isfinite(re_xy))):
            raise MaterialError("spectrum contains non-finite values")
        if grid[0] < 0 or np.any(np.diff(grid) <= 0):
            raise MaterialError("spectrum grid must be non-negative and strictly increasing")
        if np.any(im_xx < 0):
            raise MaterialError("Im eps_xx must be non-negative (passive medium)")
        if self.tail not in ("zero", "power"):
            raise MaterialError(f"tail must be 'zero' or 'power', got '{self.tail}'")
        for name, arr in (("grid", grid), ("im_eps_xx", im_xx), ("re_eps_xy", re_xy)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class PerfectMirror:
    """Unit-reflectivity reference mirror (r_ss = -1, r_pp = 1, r_sp = 0)."""


@dataclass(frozen=True)
class Vacuum:
    """No interface at all."""


MaterialParams = Union[DrudeParams, DcTransportParams, OscillatorParams,
                       TabulatedSpectrum, PerfectMirror, Vacuum]

_VARIANTS = {
    DrudeParams: "Drude",
    DcTransportParams: "DcTransport",
    OscillatorParams: "Oscillator",
    TabulatedSpectrum: "Tabulated",
    PerfectMirror: "PerfectMirror",
    Vacuum: "Vacuum",
}


@dataclass(frozen=True)
class MaterialModel:
    params: MaterialParams
    magnetization_sign: int = 1
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if type(self.params) not in _VARIANTS:
            raise MaterialError(f"unsupported material parameters {type(self.params).__name__}")
        if self.magnetization_sign not in (1, -1):
            raise MaterialError(f"magnetization_sign must be +1 or -1, got {self.magnetization_sign}")

    @property
    def variant(self) -> str:
        return _VARIANTS[type(self.params)]

    @property
    def is_perfect(self) -> bool:
        return isinstance(self.params, PerfectMirror)

    def reversed(self) -> "MaterialModel":
        """Same mirror with the magnetization flipped."""
        return replace(self, magnetization_sign=-self.magnetization_sign)


def _frequencies(omega) -> np.ndarray:
    w = np.asarray(omega, dtype=float)
    if not np.all(w > 0):
        raise MaterialError("imaginary frequency must be positive")
    return w


def _shaped(result: np.ndarray, omega):
    return float(result) if np.ndim(omega) == 0 else result


def eps_xx(model: MaterialModel, omega):
    """Diagonal dielectric function at imaginary frequency (scalar or array)."""
    w = _frequencies(omega)
    p = model.params
    if isinstance(p, DrudeParams):
        out = 1.0 + p.omega_p ** 2 * p.tau / (w * (1.0 + w * p.tau))
    elif isinstance(p, DcTransportParams):
        out = 1.0 + 4.0 * math.pi * p.sigma / w
    elif isinstance(p, OscillatorParams):
        w0sq = p.omega_0 ** 2
        out = 1.0 + (2.0 / math.pi) * w0sq * p.eps_xx_eff / (w0sq + w ** 2)
    elif isinstance(p, TabulatedSpectrum):
        out = kk_transform_xx(p, w)
    elif isinstance(p, PerfectMirror):
        out = np.full_like(w, np.inf)
    else:
        out = np.ones_like(w)
    return _shaped(out, omega)


def eps_xy(model: MaterialModel, omega):
    """Off-diagonal dielectric function at imaginary frequency, signed by the magnetization."""
    w = _frequencies(omega)
    p = model.params
    if isinstance(p, DrudeParams):
        out = p.omega_p ** 2 * p.omega_c * p.tau ** 2 / (w * (1.0 + w * p.tau) ** 2)
    elif isinstance(p, DcTransportParams):
        out = 4.0 * math.pi * p.sigma * p.theta / w
    elif isinstance(p, OscillatorParams):
        w0 = p.omega_0
        out = (2.0 / math.pi) * w0 ** 3 * p.eps_xy_eff / (w * (w0 ** 2 + w ** 2))
    elif isinstance(p, TabulatedSpectrum):
        out = kk_transform_xy(p, w)
    else:
        out = np.zeros_like(w)
    return _shaped(model.magnetization_sign * out, omega)


def _x_minus_atan(z):
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < _SERIES_CUTOFF
    z2 = z * z
    series = z * z2 * (1.0 / 3.0 - z2 * (1.0 / 5.0 - z2 / 7.0))
    return np.where(small, series, z - np.arctan(z))


def _x_minus_log1p(r):
    r = np.asarray(r, dtype=float)
    small = np.abs(r) < _SERIES_CUTOFF
    series = r * r * (0.5 - r * (1.0 / 3.0 - r / 4.0))
    return np.where(small, series, r - np.log1p(r))


def _segment_moments(spec: TabulatedSpectrum, w: np.ndarray, samples: np.ndarray):
    """Exact integrals of the linear interpolant against omega'^n/(omega'^2 + w^2).

    Returns (J1-weighted, J2-weighted, J3-weighted) sums where each segment
    contributes alpha*J_n + beta*J_{n+1} for f = alpha + beta*omega'.
    """
    a = spec.grid[:-1][None, :]
    b = spec.grid[1:][None, :]
    fa = samples[:-1][None, :]
    fb = samples[1:][None, :]
    h = b - a
    beta = (fb - fa) / h
    alpha = fa - beta * a
    ww = w.reshape(-1, 1)
    w2 = ww * ww

    r = (b * b - a * a) / (a * a + w2)
    j1 = 0.5 * np.log1p(r)
    denom = w2 + a * b
    z = h * ww / denom
    j2 = h * a * b / denom + ww * _x_minus_atan(z)
    j3 = 0.5 * (a * a * r + w2 * _x_minus_log1p(r))
    return alpha, beta, j1, j2, j3


def kk_transform_xx(spec: TabulatedSpectrum, omega):
    """1 + (2/pi) int omega' Im eps_xx(omega') / (omega'^2 + omega^2) d omega'."""
    w = _frequencies(omega)
    flat = np.atleast_1d(w).ravel()
    alpha, beta, j1, j2, _ = _segment_moments(spec, flat, spec.im_eps_xx)
    total = np.sum(alpha * j1 + beta * j2, axis=1)
    if spec.tail == "power":
        # Im eps_xx = f_last (W/omega')^3 beyond the last sample W
        z = flat / spec.grid[-1]
        total = total + spec.im_eps_xx[-1] * _x_minus_atan(z) / z ** 3
    out = (1.0 + (2.0 / math.pi) * total).reshape(np.shape(w))
    return _shaped(out, omega)


def kk_transform_xy(spec: TabulatedSpectrum, omega):
    """(2/(pi omega)) int omega'^2 Re eps_xy(omega') / (omega'^2 + omega^2) d omega'."""
    w = _frequencies(omega)
    flat = np.atleast_1d(w).ravel()
    alpha, beta, _, j2, j3 = _segment_moments(spec, flat, spec.re_eps_xy)
    total = np.sum(alpha * j2 + beta * j3, axis=1)
    out = ((2.0 / math.pi) * total / flat).reshape(np.shape(w))
    return _shaped(out, omega)


def load_spectrum(path, tail: str = "zero") -> TabulatedSpectrum:
    """Read `# omega[s^-1] im_eps_xx re_eps_xy` columns; any malformed row is an error."""
    path = Path(path)
    rows = []
    with path.open("r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) != 3:
                raise MaterialError(f"{path}:{lineno}: expected 3 columns, found {len(fields)}")
            try:
                rows.append([float(v) for v in fields])
            except ValueError:
                raise MaterialError(f"{path}:{lineno}: non-numeric value in '{line}'") from None
    if not rows:
        raise MaterialError(f"{path}: no data rows")
    data = np.array(rows)
    logger.info(f"Loaded {len(rows)} spectrum samples from {path}")
    return TabulatedSpectrum(grid=data[:, 0], im_eps_xx=data[:, 1], re_eps_xy=data[:, 2], tail=tail)


# Named parameter sets
PRESETS = {
    "transition_metal_line": OscillatorParams(omega_0=6e15, eps_xx_eff=10.0, eps_xy_eff=1.5e-2),
    # omega_p tau = 1e3, omega_c tau = 1e-3
    "drude_demo": DrudeParams(omega_p=1.4e16, omega_c=1.4e10, tau=1e3 / 1.4e16),
    "permalloy_dc": DcTransportParams(
        sigma=units.si_conductivity_to_gaussian(4.0e6), theta=5e-3, tau_equiv=1e-14),
    "perfect_mirror": PerfectMirror(),
    "vacuum": Vacuum(),
}


def from_preset(name: str, magnetization_sign: int = 1) -> MaterialModel:
    if name not in PRESETS:
        raise MaterialError(f"unknown material preset '{name}' (available: {', '.join(PRESETS)})")
    return MaterialModel(PRESETS[name], magnetization_sign=magnetization_sign, name=name)
