"""Integration engine for the (u, t) rectangle of the plate-plate integrals.

u = 2 k_perp D runs over [0, u_max] with adaptive QUADPACK panels; for
each u the inner variable t = omega/(k_perp c) in [0, 1] is integrated
with fixed Gauss-Legendre rules on decade panels, so the node set and the
summation order depend on the configuration only.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.special import roots_legendre

from ..errors import ConfigError

logger = logging.getLogger(__name__)

# Gauss-Kronrod 21-point rule per QUADPACK subinterval
_POINTS_PER_PANEL = 21
_QUADPACK_MIN_REL = 5e-14


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-8
    abs_tol: float = 0.0
    max_evaluations: int = 3_000_000
    u_max: float = 80.0
    t_order: int = 20
    t_decades: int = 16
    max_subintervals: int = 200
    strict_material_validity: bool = True

    def __post_init__(self):
        if not 0 < self.rel_tol <= 1e-2:
            raise ConfigError(f"rel_tol must lie in (0, 1e-2], got {self.rel_tol}")
        if self.abs_tol < 0:
            raise ConfigError(f"abs_tol must be non-negative, got {self.abs_tol}")
        if self.u_max < 40:
            raise ConfigError(f"u_max must be at least 40, got {self.u_max}")
        if self.t_order < 2 or self.t_decades < 1 or self.max_subintervals < 1:
            raise ConfigError("t_order, t_decades and max_subintervals must be positive")
        if self.max_evaluations < self.panel_cost:
            raise ConfigError(f"max_evaluations = {self.max_evaluations} is below one outer panel "
                              f"({self.panel_cost} kernel evaluations)")

    @property
    def panel_cost(self) -> int:
        """Kernel evaluations spent on one QUADPACK subinterval."""
        return _POINTS_PER_PANEL * self.t_order * (self.t_decades + 1)

    def subinterval_limit(self) -> int:
        # QUADPACK spends 21 (2 n - 1) outer calls on n subintervals
        panels = self.max_evaluations // self.panel_cost
        return max(1, min(self.max_subintervals, (panels + 1) // 2))


@dataclass(frozen=True)
class QuadratureOutcome:
    value: float
    error: float
    evaluations: int
    converged: bool


@lru_cache(maxsize=16)
def t_rule(order: int, decades: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [0, 1]: panels [10^-(j+1), 10^-j] plus [0, 10^-decades]."""
    x, w = roots_legendre(order)
    edges = np.concatenate(([0.0], np.logspace(-decades, 0, decades + 1)))
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        nodes.append(lo + half * (x + 1.0))
        weights.append(half * w)
    nodes = np.concatenate(nodes)
    weights = np.concatenate(weights)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def integrate_plane(kernel: Callable[[float, np.ndarray], np.ndarray], power: int,
                    cfg: QuadratureConfig, scale: float = 1.0) -> QuadratureOutcome:
    """scale * int_0^u_max u^power du int_0^1 kernel(u, t) dt."""
    nodes, weights = t_rule(cfg.t_order, cfg.t_decades)
    calls = 0

    def outer(u: float) -> float:
        nonlocal calls
        calls += 1
        return u ** power * float(np.dot(weights, kernel(u, nodes)))

    limit = cfg.subinterval_limit()
    epsabs = cfg.abs_tol / abs(scale) if scale else 0.0
    result = quad(outer, 0.0, cfg.u_max, epsabs=epsabs, epsrel=max(cfg.rel_tol, _QUADPACK_MIN_REL),
                  limit=limit, full_output=1)
    value, error = result[0], result[1]
    converged = len(result) == 3
    if not converged:
        logger.warning(f"u-integral did not converge: {result[3].splitlines()[0]}")
    return QuadratureOutcome(value=scale * value, error=abs(scale) * error,
                             evaluations=calls * nodes.size, converged=converged)
