"""Distance sweeps, serial or over a process pool, always in input order."""
from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Optional

from ..errors import ConfigError

logger = logging.getLogger(__name__)

THREADS_ENV = "CASIMIR_MAG_THREADS"


def resolve_threads(requested: Optional[int] = None) -> int:
    """Worker count: the environment variable wins over the requested value."""
    raw = os.environ.get(THREADS_ENV)
    if raw is not None and raw.strip():
        try:
            threads = int(raw)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got '{raw}'") from None
    else:
        threads = 1 if requested is None else requested
    if threads < 1:
        raise ConfigError(f"thread count must be at least 1, got {threads}")
    return threads


def run_sweep(fn: Callable, values: Iterable, threads: int = 1) -> list:
    """fn(value) for every value; `fn` must be picklable when threads > 1."""
    values = list(values)
    if threads <= 1 or len(values) < 2:
        return [fn(v) for v in values]
    workers = min(threads, len(values))
    logger.info(f"Sweeping {len(values)} points on {workers} workers")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, values))
